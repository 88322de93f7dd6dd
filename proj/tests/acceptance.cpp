// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria (0 when all pass).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "shs/harness.hpp"

namespace {

using shs::CMatrix;
using shs::CVector;
using shs::Status;

class Criterion {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) failed_.push_back(what);
    ++checks_;
  }
  void near(double got, double want, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s = %.15g (want %.15g +- %.1g)", what.c_str(), got, want, tol);
    check(std::abs(got - want) <= tol, buf);
  }
  void status(Status got, Status want, const std::string& what) {
    check(got == want, what + " = " + shs::to_string(got) + " (want " + shs::to_string(want) + ")");
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }

  bool passed() const { return failed_.empty(); }
  std::string summary() const {
    std::string s = std::to_string(checks_) + " checks";
    if (!notes_.empty()) s += "; " + notes_;
    for (const auto& f : failed_) s += "; FAILED " + f;
    return s;
  }

 private:
  std::vector<std::string> failed_;
  std::string notes_;
  int checks_ = 0;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void closing_example(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const shs::ProblemFile p = shs::shifted_triangular_problem(0.01);
  const auto ctx = shs::make_context(p.A);
  const double eps = p.epsilon;
  const CMatrix tp = p.T + CMatrix::identity(2);
  const double w_big = shs::num_radius(ctx, tp + 1000.0 * p.S);
  const double w_tp = shs::num_radius(ctx, tp);
  const double w_s = shs::num_radius(ctx, 1000.0 * p.S);
  c.near(w_big, std::sqrt(5.0) / 2.0, 1e-9, "w(T+I+1000S)");
  c.near(w_tp, (1.0 + std::numbers::sqrt2) / 2.0, 1e-9, "w(T+I)");
  const double lhs = w_big * w_big;
  const double rhs = w_tp * w_tp - 2.0 * eps * w_tp * w_s;
  c.near(lhs, 1.25, 1e-9, "lhs");
  c.near(rhs, std::pow((1.0 + std::numbers::sqrt2) / 2.0, 2) - eps * (1.0 + std::numbers::sqrt2), 1e-9, "rhs");
  c.check(std::abs(rhs - 1.4328) < 5e-4, "rhs ~ 1.4328");
  c.check(lhs < rhs, "lhs < rhs");
  c.note("sides " + fmt("%.6f", lhs) + " / " + fmt("%.6f", rhs));

  const auto plain = shs::decide_wbj_direct(ctx, p.T, p.S, eps);
  c.status(plain.status, Status::Holds, "wbj_direct(T,S)");
  const auto shifted = shs::decide_wbj_direct(ctx, tp, p.S, eps);
  c.status(shifted.status, Status::Fails, "wbj_direct(T+I,S)");
  // lambda = 1000 is a valid falsifying witness for (T+I, S).
  const double f1000 = lhs - w_tp * w_tp + 2.0 * eps * w_tp * w_s;
  c.check(f1000 < 0.0, "lambda=1000 violates the definition");
  const double secs = elapsed(t0);
  c.check(secs < 1.0, "runtime " + fmt("%.3f s", secs) + " < 1 s");
  c.note(fmt("%.3f s", secs));
}

void truncated_examples(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  for (double eps : {0.1, 0.3, 0.9}) {
    const std::string tag = fmt(" eps=%.1f", eps);
    const shs::ProblemFile p = shs::truncated_diagonal_problem(eps);
    const auto ctx = shs::make_context(p.A);
    c.near(shs::op_seminorm(ctx, p.T), shs::DiagonalFamily::alpha, 1e-9, "||T||_A" + tag);
    c.near(shs::op_seminorm(ctx, p.S), 1.0, 1e-9, "||S||_A" + tag);
    c.status(shs::decide_bj(ctx, p.T, p.S, eps).status, Status::Holds, "decide_bj" + tag);
    c.status(shs::decide_wbj_direct(ctx, p.T, p.S, eps).status, Status::Holds, "decide_wbj_direct" + tag);
  }
  const double secs = elapsed(t0);
  c.check(secs < 1.0, "runtime " + fmt("%.3f s", secs) + " < 1 s");
  c.note(fmt("%.3f s", secs));
}

void half_beta_alpha(Criterion& c) {
  using F = shs::DiagonalFamily;
  const shs::ProblemFile p = shs::half_beta_alpha_problem(0.6);
  const auto ctx = shs::make_context(p.A);
  const auto w = shs::wset(ctx, p.T, p.S);
  const double gap = shs::support_gap(w, F::beta * F::alpha / 2.0);
  c.check(gap >= -1e-8, "support gap of beta*alpha/2 = " + fmt("%.3g", gap) + " >= -1e-8");
  c.status(shs::decide_bj(ctx, p.T, p.S, 0.6).status, Status::Holds, "decide_bj eps=0.6");
  const double ce = shs::critical_epsilon(ctx, p.T, p.S);
  c.check(ce <= 0.5 + 1e-7, "critical epsilon " + fmt("%.12g", ce) + " <= 0.5 + 1e-7");
  c.note("critical epsilon " + fmt("%.12g", ce));
}

void nonconverse(Criterion& c) {
  const auto ctx = shs::make_context(CMatrix::identity(2));
  const CMatrix t = CMatrix::diagonal({1.0, 0.0});
  for (double eps : {0.1, 0.5, 0.9}) {
    const std::string tag = fmt(" eps=%.1f", eps);
    c.status(shs::decide_bj(ctx, CMatrix::identity(2), t, eps).status, Status::Holds, "decide_bj(I,T)" + tag);
    const CVector x0{std::sqrt(eps / 2.0), std::sqrt(1.0 - eps / 2.0)};
    const auto v = shs::vdot(x0, t * x0);
    c.near(std::abs(v - eps / 2.0), 0.0, 1e-12, "|<Tx0,x0> - eps/2|" + tag);
  }
}

shs::SuiteConfig suite_config(std::size_t per_dim, std::vector<std::string> props) {
  shs::SuiteConfig cfg;
  cfg.count = per_dim;
  cfg.dims = {2, 3, 4, 6};
  cfg.properties = std::move(props);
  return cfg;
}

std::string stats_text(const shs::PropertyStats& s) {
  std::string out = s.name + " " + std::to_string(s.pass) + "/" + std::to_string(s.fail) + "/" +
                    std::to_string(s.inconclusive) + " (pass/fail/inconclusive)";
  for (const auto& f : s.failures) out += " [dim " + std::to_string(f.dim) + " seed " + std::to_string(f.seed) + ": " + f.detail + "]";
  return out;
}

void cross_method(Criterion& c) {
  const auto r = shs::property_suite(suite_config(500, {"bj-agreement"}));
  const auto& s = r.properties.at(0);
  c.check(s.total() == 2000, "2000 instances");
  c.check(s.fail == 0, "no hard disagreement");
  c.check(s.inconclusive_rate() < 0.02, "inconclusive rate " + fmt("%.4f", s.inconclusive_rate()) + " < 0.02");
  c.check(r.seconds < 300.0, "runtime " + fmt("%.1f s", r.seconds) + " < 300 s");
  c.note(stats_text(s) + ", " + fmt("%.1f s", r.seconds));
}

void shift_suite(Criterion& c) {
  const auto r = shs::property_suite(suite_config(50, {"shift-equivalence"}));
  const auto& s = r.properties.at(0);
  c.check(s.total() == 200, "200 instances");
  c.check(s.fail == 0, "no hard disagreement");
  c.note(stats_text(s) + ", " + fmt("%.1f s", r.seconds));
}

void structural(Criterion& c) {
  const auto r = shs::property_suite(suite_config(
      50, {"seminorm-sandwich", "sharp-isometry", "sharp-involution", "nilpotent-half-norm", "shift-radius",
           "verdict-invariance"}));
  for (const auto& s : r.properties) {
    c.check(s.total() >= 200, s.name + " >= 200 instances");
    c.check(s.fail == 0, s.name + " no failures");
    c.note(stats_text(s));
  }
}

void magajna(Criterion& c) {
  const auto r = shs::property_suite(suite_config(50, {"magajna"}));
  const auto& s = r.properties.at(0);
  c.check(s.total() == 200, "200 pairs");
  c.check(s.fail == 0 && s.inconclusive == 0, "decide_bj agrees with the attaining-vector search");
  c.note(stats_text(s));
}

void kernels(Criterion& c) {
  const auto r = shs::property_suite(suite_config(25, {"kernel-roundtrip"}));
  const auto& s = r.properties.at(0);
  c.check(s.total() == 100, "100 matrices per shape class");
  c.check(s.fail == 0, "all within 1e-9 relative");
  c.note(stats_text(s));
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<void(Criterion&)> run;
  };
  const std::vector<Entry> entries = {
      {1, "shifted-triangular radius regression", closing_example},
      {2, "truncated diagonal family, both orthogonalities", truncated_examples},
      {3, "half-beta-alpha W-set membership", half_beta_alpha},
      {4, "unit-weight non-converse", nonconverse},
      {5, "cross-method agreement suite", cross_method},
      {6, "shift-equivalence suite", shift_suite},
      {7, "structural invariants", structural},
      {8, "classical (A = I, eps = 0) specialization", magajna},
      {9, "kernel round-trips", kernels},
  };
  int failures = 0;
  for (const auto& e : entries) {
    Criterion c;
    try {
      e.run(c);
    } catch (const std::exception& ex) {
      c.check(false, std::string("exception: ") + ex.what());
    }
    failures += c.passed() ? 0 : 1;
    std::printf("%s criterion %d: %s | %s\n", c.passed() ? "PASS" : "FAIL", e.id, e.name, c.summary().c_str());
    std::fflush(stdout);
  }
  return failures;
}
