#pragma once

// Built-in regression packs: small, fully specified instances with known answers.
// Infinite diagonal operators are truncated to the smallest dimension that keeps
// every A-seminorm quantity unchanged (A has finite rank).

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "shs/gauges.hpp"
#include "shs/harness/problem.hpp"
#include "shs/harness/report.hpp"
#include "shs/ortho.hpp"
#include "shs/semispace.hpp"

namespace shs {

struct ExampleCheck {
  std::string name;
  std::string expected;
  std::string observed;
  bool passed = false;
};

struct ExamplePack {
  std::string name;
  std::string description;
  std::vector<ExampleCheck> checks;
  double seconds = 0.0;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

struct ExamplesReport {
  std::vector<ExamplePack> packs;

  bool passed() const {
    for (const auto& p : packs)
      if (!p.passed()) return false;
    return true;
  }
  const ExamplePack* find(std::string_view name) const {
    for (const auto& p : packs)
      if (p.name == name) return &p;
    return nullptr;
  }
};

/// Free parameters of the diagonal families: 0 < a1 < a2 < a3 < alpha, beta >= 2.
struct DiagonalFamily {
  static constexpr double alpha = 2.0;
  static constexpr double a1 = 0.5;
  static constexpr double a2 = 1.0;
  static constexpr double a3 = 1.5;
  static constexpr double beta = 2.0;
};

/// A = diag(1,1,0), T = diag(alpha, a1, a2), S = diag(eps, 1, 1).
inline ProblemFile truncated_diagonal_problem(double eps) {
  using F = DiagonalFamily;
  ProblemFile p;
  p.dim = 3;
  p.A = CMatrix::diagonal({1.0, 1.0, 0.0});
  p.T = CMatrix::diagonal({F::alpha, F::a1, F::a2});
  p.S = CMatrix::diagonal({eps, 1.0, 1.0});
  p.epsilon = eps;
  p.label = "truncated-diagonal";
  return p;
}

/// A = diag(1,1,0,1), T = diag(alpha, a1, a2, a3), S = diag(beta/2, beta, 1, 1).
inline ProblemFile half_beta_alpha_problem(double eps) {
  using F = DiagonalFamily;
  ProblemFile p;
  p.dim = 4;
  p.A = CMatrix::diagonal({1.0, 1.0, 0.0, 1.0});
  p.T = CMatrix::diagonal({F::alpha, F::a1, F::a2, F::a3});
  p.S = CMatrix::diagonal({F::beta / 2.0, F::beta, 1.0, 1.0});
  p.epsilon = eps;
  p.label = "half-beta-alpha";
  return p;
}

/// A = I, T = [[-1, 1], [0, -2]], S = diag(1/1000, 0).
inline ProblemFile shifted_triangular_problem(double eps = 0.01) {
  ProblemFile p;
  p.dim = 2;
  p.A = CMatrix::identity(2);
  p.T = CMatrix{{-1.0, 1.0}, {0.0, -2.0}};
  p.S = CMatrix::diagonal({1e-3, 0.0});
  p.epsilon = eps;
  p.label = "shifted-triangular";
  return p;
}

namespace detail {

inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

class PackBuilder {
 public:
  PackBuilder(std::string name, std::string description) {
    pack_.name = std::move(name);
    pack_.description = std::move(description);
  }

  void near(const std::string& what, double observed, double expected, double tol) {
    pack_.checks.push_back({what, num(expected) + " +- " + num(tol), num(observed),
                            std::abs(observed - expected) <= tol});
  }
  void at_most(const std::string& what, double observed, double bound) {
    pack_.checks.push_back({what, "<= " + num(bound), num(observed), observed <= bound});
  }
  void less(const std::string& what, double lhs, double rhs) {
    pack_.checks.push_back({what, "lhs < rhs", num(lhs) + " < " + num(rhs), lhs < rhs});
  }
  void status(const std::string& what, Status observed, Status expected) {
    pack_.checks.push_back({what, to_string(expected), to_string(observed), observed == expected});
  }
  void flag(const std::string& what, bool ok, const std::string& expected, const std::string& observed) {
    pack_.checks.push_back({what, expected, observed, ok});
  }
  template <class F>
  void guarded(const std::string& what, F&& body) {
    try {
      body();
    } catch (const Error& e) {
      pack_.checks.push_back({what, "no error", e.what(), false});
    }
  }
  ExamplePack finish(const Stopwatch& clock) {
    pack_.seconds = clock.seconds();
    return std::move(pack_);
  }

 private:
  ExamplePack pack_;
};

inline ExamplePack truncated_diagonal_pack() {
  using F = DiagonalFamily;
  const Stopwatch clock;
  PackBuilder b("truncated-diagonal", "A = diag(1,1,0), T = diag(2, 0.5, 1), S = diag(eps, 1, 1); rank-2 weight");
  for (double eps : {0.1, 0.3, 0.9}) {
    const std::string tag = " eps=" + num(eps);
    b.guarded("bj" + tag, [&] {
      const ProblemFile p = truncated_diagonal_problem(eps);
      const AContext ctx = make_context(p.A);
      b.near("||T||_A" + tag, op_seminorm(ctx, p.T), F::alpha, 1e-9);
      b.near("||S||_A" + tag, op_seminorm(ctx, p.S), 1.0, 1e-9);
      const CVector e1{1.0, 0.0, 0.0};
      b.near("<T e1, S e1>_A" + tag, inner_a(ctx, p.T * e1, p.S * e1).real(), eps * F::alpha, 1e-12);
      b.status("decide_bj" + tag, decide_bj(ctx, p.T, p.S, eps).status, Status::Holds);
    });
  }
  return b.finish(clock);
}

inline ExamplePack half_beta_alpha_pack() {
  using F = DiagonalFamily;
  const Stopwatch clock;
  PackBuilder b("half-beta-alpha",
                "A = diag(1,1,0,1), T = diag(2, 0.5, 1, 1.5), S = diag(1, 2, 1, 1); beta*alpha/2 in W_A(T,S)");
  b.guarded("wset", [&] {
    const ProblemFile p = half_beta_alpha_problem(0.6);
    const AContext ctx = make_context(p.A);
    const double nt = op_seminorm(ctx, p.T), ns = op_seminorm(ctx, p.S);
    b.near("||T||_A", nt, F::alpha, 1e-9);
    b.near("||S||_A", ns, F::beta, 1e-9);
    const WSet w = wset(ctx, p.T, p.S);
    b.at_most("-support_gap(beta*alpha/2)", -support_gap(w, F::beta * F::alpha / 2.0), 1e-8);
    b.status("decide_bj eps=0.6", decide_bj(ctx, p.T, p.S, 0.6).status, Status::Holds);
    b.at_most("critical epsilon", critical_epsilon(ctx, p.T, p.S), 0.5 + 1e-7);
  });
  return b.finish(clock);
}

inline ExamplePack radius_variant_pack() {
  using F = DiagonalFamily;
  const Stopwatch clock;
  PackBuilder b("radius-variant", "same operators as truncated-diagonal under numerical-radius orthogonality");
  for (double eps : {0.1, 0.3, 0.9}) {
    const std::string tag = " eps=" + num(eps);
    b.guarded("wbj" + tag, [&] {
      const ProblemFile p = truncated_diagonal_problem(eps);
      const AContext ctx = make_context(p.A);
      b.near("w_A(T)" + tag, num_radius(ctx, p.T), F::alpha, 1e-9);
      b.near("w_A(S)" + tag, num_radius(ctx, p.S), 1.0, 1e-9);
      b.status("decide_wbj_direct" + tag, decide_wbj_direct(ctx, p.T, p.S, eps).status, Status::Holds);
    });
  }
  return b.finish(clock);
}

inline ExamplePack unit_weight_nonconverse_pack() {
  const Stopwatch clock;
  PackBuilder b("unit-weight-nonconverse",
                "A = I, T = diag(1,0): w(T) = ||T|| yet I is eps-orthogonal to T for every eps");
  b.guarded("gauges", [&] {
    const AContext ctx = make_context(CMatrix::identity(2));
    const CMatrix t = CMatrix::diagonal({1.0, 0.0});
    b.near("w(T)", num_radius(ctx, t), 1.0, 1e-12);
    b.near("||T||", op_seminorm(ctx, t), 1.0, 1e-12);
    for (double eps : {0.1, 0.5, 0.9}) {
      const std::string tag = " eps=" + num(eps);
      const CVector x0{std::sqrt(eps / 2.0), std::sqrt(1.0 - eps / 2.0)};
      const cplx value = vdot(x0, t * x0);
      b.near("<T x0, x0>" + tag, std::abs(value - eps / 2.0), 0.0, 1e-12);
      b.near("||x0||" + tag, norm2(x0), 1.0, 1e-12);
      const WSet w = wset(ctx, CMatrix::identity(2), t);
      b.at_most("-support_gap(eps/2)" + tag, -support_gap(w, eps / 2.0), 1e-9);
      b.status("decide_bj(I, T)" + tag, decide_bj(ctx, CMatrix::identity(2), t, eps).status, Status::Holds);
    }
  });
  return b.finish(clock);
}

inline ExamplePack shifted_triangular_pack() {
  const Stopwatch clock;
  PackBuilder b("shifted-triangular",
                "A = I, T = [[-1,1],[0,-2]], S = diag(1/1000, 0), eps = 0.01; T is not positive");
  b.guarded("radius values", [&] {
    const ProblemFile p = shifted_triangular_problem();
    const AContext ctx = make_context(p.A);
    const double eps = p.epsilon;
    const CMatrix tp = p.T + CMatrix::identity(2);
    const double w_big = num_radius(ctx, tp + 1000.0 * p.S);
    const double w_tp = num_radius(ctx, tp);
    const double w_s = num_radius(ctx, 1000.0 * p.S);
    b.near("w(T+I+1000S)", w_big, std::sqrt(5.0) / 2.0, 1e-9);
    b.near("w(T+I)", w_tp, (1.0 + std::numbers::sqrt2) / 2.0, 1e-9);
    const double lhs = w_big * w_big;
    const double rhs = w_tp * w_tp - 2.0 * eps * w_tp * w_s;
    const double rhs_exact = std::pow((1.0 + std::numbers::sqrt2) / 2.0, 2) - eps * (1.0 + std::numbers::sqrt2);
    b.near("w^2(T+I+1000S)", lhs, 1.25, 1e-9);
    b.near("w^2(T+I) - 2 eps w(T+I) w(1000S)", rhs, rhs_exact, 1e-9);
    b.less("lambda = 1000 violates the inequality", lhs, rhs);

    const Verdict shifted = decide_wbj_direct(ctx, tp, p.S, eps);
    b.status("decide_wbj_direct(T+I, S)", shifted.status, Status::Fails);
    const Verdict plain = decide_wbj_direct(ctx, p.T, p.S, eps);
    b.status("decide_wbj_direct(T, S)", plain.status, Status::Holds);

    bool rejected = false;
    try {
      shift_equivalence_check(ctx, p.T, p.S, eps);
    } catch (const Error& e) {
      rejected = e.code() == Errc::NotAPositive;
    }
    b.flag("shift_equivalence_check rejects T", rejected, "NotAPositive", rejected ? "NotAPositive" : "accepted");
  });
  return b.finish(clock);
}

}  // namespace detail

inline ExamplesReport builtin_examples() {
  ExamplesReport r;
  r.packs.push_back(detail::truncated_diagonal_pack());
  r.packs.push_back(detail::half_beta_alpha_pack());
  r.packs.push_back(detail::radius_variant_pack());
  r.packs.push_back(detail::unit_weight_nonconverse_pack());
  r.packs.push_back(detail::shifted_triangular_pack());
  return r;
}

inline nlohmann::ordered_json examples_to_json(const ExamplesReport& r, bool include_timing = true) {
  using detail::ojson;
  ojson j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = std::string(kToolVersion);
  j["passed"] = r.passed();
  ojson packs = ojson::array();
  for (const auto& p : r.packs) {
    ojson checks = ojson::array();
    for (const auto& c : p.checks) {
      checks.push_back(
          ojson{{"name", c.name}, {"expected", c.expected}, {"observed", c.observed}, {"passed", c.passed}});
    }
    ojson e{{"name", p.name}, {"description", p.description}, {"passed", p.passed()}, {"checks", std::move(checks)}};
    if (include_timing) e["seconds"] = p.seconds;
    packs.push_back(std::move(e));
  }
  j["packs"] = std::move(packs);
  return j;
}

}  // namespace shs
