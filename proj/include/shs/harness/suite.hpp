#pragma once

// Randomized property verification. Every case is generated from a derived seed,
// so a failure can be replayed from its serialized instance alone.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "shs/densela.hpp"
#include "shs/gauges.hpp"
#include "shs/harness/generate.hpp"
#include "shs/harness/problem.hpp"
#include "shs/harness/report.hpp"
#include "shs/ortho.hpp"
#include "shs/semispace.hpp"

namespace shs {

enum class CaseResult { Pass, Fail, Inconclusive };

struct CaseOutcome {
  CaseResult result = CaseResult::Pass;
  std::string detail;
  nlohmann::ordered_json instance;  // replayable input, usually a problem file
};

struct FailureCase {
  std::size_t dim = 0;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string detail;
  nlohmann::ordered_json instance;
};

struct PropertyStats {
  std::string name;
  std::size_t pass = 0, fail = 0, inconclusive = 0;
  double seconds = 0.0;
  std::vector<FailureCase> failures;  // first kMaxRecordedFailures only

  std::size_t total() const { return pass + fail + inconclusive; }
  double inconclusive_rate() const {
    return total() == 0 ? 0.0 : static_cast<double>(inconclusive) / static_cast<double>(total());
  }
};

struct SuiteConfig {
  std::size_t count = 200;                  // cases per property per dimension
  std::vector<std::size_t> dims = {2, 3, 4, 6};
  std::uint64_t seed = 0x5eed;
  std::vector<std::string> properties;      // empty: all
  Tolerances tols;
  GridSpec grid;
};

struct SuiteReport {
  std::vector<PropertyStats> properties;
  double seconds = 0.0;

  bool passed() const {
    return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.fail == 0; });
  }
  const PropertyStats* find(std::string_view name) const {
    for (const auto& p : properties)
      if (p.name == name) return &p;
    return nullptr;
  }
};

namespace detail {

inline constexpr std::size_t kMaxRecordedFailures = 20;

using PropertyFn = std::function<CaseOutcome(std::size_t dim, std::uint64_t seed, const SuiteConfig&)>;

struct Property {
  std::string_view name;
  PropertyFn run;
};

inline CaseOutcome outcome(CaseResult r, std::string detail, nlohmann::ordered_json instance = {}) {
  return {r, std::move(detail), std::move(instance)};
}

/// Weight with mixed rank. min_rank forces enough range for nilpotent operators.
inline InstanceSpec mixed_spec(std::size_t n, std::uint64_t seed, std::size_t min_rank = 1) {
  std::mt19937_64 rng(seed);
  InstanceSpec spec;
  spec.dim = n;
  spec.seed = splitmix64(seed);
  const std::size_t max_zeros = n - min_rank;
  switch (rng() % 3) {
    case 0: spec.weight = WeightKind::Identity; break;
    case 1:
      spec.weight = WeightKind::DiagonalWithZeros;
      spec.weight_param = rng() % (max_zeros + 1);
      break;
    default:
      spec.weight = WeightKind::RandomPsd;
      spec.weight_param = min_rank + rng() % (n - min_rank + 1);
      break;
  }
  return spec;
}

inline ProblemFile with_config(ProblemFile p, const SuiteConfig& cfg) {
  if (!(cfg.tols == Tolerances{})) p.tolerances = cfg.tols;
  if (!(cfg.grid == GridSpec{})) p.grid = cfg.grid;
  return p;
}

inline double tol_scale(double x) { return std::max(1.0, std::abs(x)); }

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

/// Pass when all statuses match, Inconclusive when the only differences involve
/// an Inconclusive status (or all are Inconclusive), Fail on Holds vs Fails.
inline CaseResult agreement(const std::vector<Status>& statuses) {
  bool holds = false, fails = false, unsure = false;
  for (Status s : statuses) {
    holds |= s == Status::Holds;
    fails |= s == Status::Fails;
    unsure |= s == Status::Inconclusive;
  }
  if (holds && fails) return CaseResult::Fail;
  return unsure ? CaseResult::Inconclusive : CaseResult::Pass;
}

inline std::string status_list(const std::vector<Status>& statuses) {
  std::string out;
  for (Status s : statuses) out += std::string(out.empty() ? "" : ",") + to_string(s);
  return out;
}

inline CaseOutcome bj_agreement(std::size_t n, std::uint64_t seed, const SuiteConfig& cfg) {
  InstanceSpec spec = mixed_spec(n, seed);
  spec.t_kind = seed % 5 == 0 ? OperatorKind::Diagonal : OperatorKind::Random;
  spec.s_kind = seed % 7 == 0 ? OperatorKind::Diagonal : OperatorKind::Random;
  const ProblemFile p = with_config(gen_instance(spec), cfg);
  const AContext ctx = make_context(p.A, cfg.tols);
  const std::vector<Status> st = {decide_bj(ctx, p.T, p.S, p.epsilon).status,
                                  decide_bj_direct(ctx, p.T, p.S, p.epsilon, cfg.grid).status,
                                  decide_bj_alpha(ctx, p.T, p.S, p.epsilon).status};
  return outcome(agreement(st), "wset,direct,alpha = " + status_list(st), problem_to_json(p));
}

inline CaseOutcome shift_equivalence(std::size_t n, std::uint64_t seed, const SuiteConfig& cfg) {
  InstanceSpec spec = mixed_spec(n, seed);
  spec.t_kind = OperatorKind::APositive;
  spec.s_kind = seed % 3 == 0 ? OperatorKind::APositive : OperatorKind::Random;
  const ProblemFile p = with_config(gen_instance(spec), cfg);
  const AContext ctx = make_context(p.A, cfg.tols);
  const auto [plain, shifted] = shift_equivalence_check(ctx, p.T, p.S, p.epsilon, cfg.grid);
  const std::vector<Status> st = {plain.status, shifted.status};
  return outcome(agreement(st), "(T,S),(T+I,S) = " + status_list(st), problem_to_json(p));
}

inline CaseOutcome seminorm_sandwich(std::size_t n, std::uint64_t seed, const SuiteConfig& cfg) {
  InstanceSpec spec = mixed_spec(n, seed);
  spec.t_kind = seed % 2 == 0 ? OperatorKind::Random : OperatorKind::APositive;
  const ProblemFile p = gen_instance(spec);
  const AContext ctx = make_context(p.A, cfg.tols);
  const double nt = op_seminorm(ctx, p.T);
  const double w = num_radius(ctx, p.T);
  const double slack = 1e-9 * tol_scale(nt);
  const bool ok = 0.5 * nt <= w + slack && w <= nt + slack;
  return outcome(ok ? CaseResult::Pass : CaseResult::Fail, "||T||=" + fmt(nt) + " w=" + fmt(w),
                 problem_to_json(p));
}

inline CaseOutcome sharp_isometry(std::size_t n, std::uint64_t seed, const SuiteConfig& cfg) {
  InstanceSpec spec = mixed_spec(n, seed);
  const ProblemFile p = gen_instance(spec);
  const AContext ctx = make_context(p.A, cfg.tols);
  const double nt = op_seminorm(ctx, p.T);
  const double ns = op_seminorm(ctx, sharp_adjoint(ctx, p.T));
  const bool ok = std::abs(nt - ns) <= 1e-8 * tol_scale(nt);
  return outcome(ok ? CaseResult::Pass : CaseResult::Fail, "||T||=" + fmt(nt) + " ||T#||=" + fmt(ns),
                 problem_to_json(p));
}

inline double max_entry(const CMatrix& m) {
  double out = 0.0;
  for (const cplx& z : m.entries()) out = std::max(out, std::abs(z));
  return out;
}

inline CaseOutcome sharp_involution(std::size_t n, std::uint64_t seed, const SuiteConfig& cfg) {
  InstanceSpec spec = mixed_spec(n, seed);
  const ProblemFile p = gen_instance(spec);
  const AContext ctx = make_context(p.A, cfg.tols);
  const CMatrix twice = sharp_adjoint(ctx, sharp_adjoint(ctx, p.T));
  const double err = max_entry(twice - ctx.P_A * p.T * ctx.P_A);
  const bool ok = err <= 1e-8 * tol_scale(max_entry(p.T));
  return outcome(ok ? CaseResult::Pass : CaseResult::Fail, "max |(T#)# - P T P| = " + fmt(err),
                 problem_to_json(p));
}

inline CaseOutcome nilpotent_half_norm(std::size_t n, std::uint64_t seed, const SuiteConfig& cfg) {
  InstanceSpec spec = mixed_spec(n, seed, 2);
  spec.t_kind = OperatorKind::Nilpotent;
  const ProblemFile p = gen_instance(spec);
  const AContext ctx = make_context(p.A, cfg.tols);
  const double nt = op_seminorm(ctx, p.T);
  const double w = num_radius(ctx, p.T);
  const bool ok = std::abs(w - 0.5 * nt) <= 1e-8 * tol_scale(nt);
  return outcome(ok ? CaseResult::Pass : CaseResult::Fail, "||T||=" + fmt(nt) + " w=" + fmt(w),
                 problem_to_json(p));
}

inline CaseOutcome shift_radius(std::size_t n, std::uint64_t seed, const SuiteConfig& cfg) {
  InstanceSpec spec = mixed_spec(n, seed);
  spec.t_kind = OperatorKind::APositive;
  const ProblemFile p = gen_instance(spec);
  const AContext ctx = make_context(p.A, cfg.tols);
  const double w = num_radius(ctx, p.T);
  const double w1 = num_radius(ctx, p.T + CMatrix::identity(n));
  const bool ok = std::abs(w1 - w - 1.0) <= 1e-8 * tol_scale(w);
  return outcome(ok ? CaseResult::Pass : CaseResult::Fail, "w(T)=" + fmt(w) + " w(T+I)=" + fmt(w1),
                 problem_to_json(p));
}

/// Homogeneity, P_A substitution and sharp substitution leave the decide_bj
/// status unchanged, and T is never orthogonal to a multiple of itself.
inline CaseOutcome verdict_invariance(std::size_t n, std::uint64_t seed, const SuiteConfig& cfg) {
  InstanceSpec spec = mixed_spec(n, seed);
  const ProblemFile p = gen_instance(spec);
  const AContext ctx = make_context(p.A, cfg.tols);
  std::mt19937_64 rng(splitmix64(seed ^ 0xabcdef));
  const cplx a = complex_normal(rng), b = complex_normal(rng), c = complex_normal(rng);
  const CMatrix pt = project_pa(ctx, p.T), ps = project_pa(ctx, p.S);
  const double eps = p.epsilon;
  const std::vector<Status> st = {
      decide_bj(ctx, p.T, p.S, eps).status,
      decide_bj(ctx, a * p.T, b * p.S, eps).status,
      decide_bj(ctx, p.T, ps, eps).status,
      decide_bj(ctx, pt, ps, eps).status,
      decide_bj(ctx, sharp_adjoint(ctx, p.T), sharp_adjoint(ctx, p.S), eps).status,
  };
  const Status multiple = decide_bj(ctx, p.T, c * p.T, eps).status;
  std::string detail = "base,scaled,S->PS,both->P,sharp = " + status_list(st) +
                       "; T vs cT = " + to_string(multiple);
  CaseResult r = agreement(st);
  if (multiple == Status::Holds) r = CaseResult::Fail;
  else if (multiple == Status::Inconclusive && r == CaseResult::Pass) r = CaseResult::Inconclusive;
  return outcome(r, detail, problem_to_json(p));
}

/// Smallest |y* G y| over unit y, by multi-start compass search on (Re y, Im y).
inline double min_abs_form(const CMatrix& g, std::mt19937_64& rng) {
  const std::size_t k = g.rows();
  auto value = [&](const std::vector<double>& z) {
    CVector y(k);
    double nrm = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      y[i] = {z[2 * i], z[2 * i + 1]};
      nrm += std::norm(y[i]);
    }
    if (nrm == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(vdot(y, g * y)) / nrm;
  };
  double best = std::numeric_limits<double>::infinity();
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int start = 0; start < 16; ++start) {
    std::vector<double> z(2 * k);
    for (auto& x : z) x = normal(rng);
    double fz = value(z);
    double step = 0.5;
    for (int iter = 0; iter < 20000 && step > 1e-13; ++iter) {
      bool moved = false;
      for (std::size_t i = 0; i < z.size(); ++i) {
        for (double dir : {1.0, -1.0}) {
          z[i] += dir * step;
          const double f = value(z);
          if (f < fz) {
            fz = f;
            moved = true;
            break;
          }
          z[i] -= dir * step;
        }
      }
      if (!moved) step *= 0.5;
    }
    best = std::min(best, fz);
  }
  return best;
}

/// A = I, eps = 0: Holds iff some unit norm-attaining x has <Tx, Sx> = 0.
/// T is built with a known k-fold top singular value so the attaining span is exact.
inline CaseOutcome magajna(std::size_t n, std::uint64_t seed, const SuiteConfig& cfg) {
  std::mt19937_64 rng(seed);
  const std::size_t k = 1 + seed % std::min<std::size_t>(3, n);
  const CMatrix u = random_unitary(n, rng), v = random_unitary(n, rng);
  std::vector<cplx> sigma(n, 1.0);
  for (std::size_t i = k; i < n; ++i) sigma[i] = uniform(rng, 0.1, 0.9);
  ProblemFile p;
  p.dim = n;
  p.A = CMatrix::identity(n);
  p.T = u * CMatrix::diagonal(sigma) * v.adjoint();
  p.S = complex_gaussian(n, n, rng);
  p.epsilon = 0.0;
  p.label = "magajna k=" + std::to_string(k);

  const AContext ctx = make_context(p.A, cfg.tols);
  const Status st = decide_bj(ctx, p.T, p.S, 0.0).status;
  const CMatrix vk = v.columns(0, k);
  const CMatrix form = vk.adjoint() * p.S.adjoint() * p.T * vk;  // y* form y = <T x, S x>
  const double best = min_abs_form(form, rng);
  const bool found = best <= 1e-7;
  std::string detail = "decide_bj=" + std::string(to_string(st)) + " min|<Tx,Sx>|=" + fmt(best);
  CaseResult r = CaseResult::Pass;
  if (st == Status::Inconclusive) r = CaseResult::Inconclusive;
  else if ((st == Status::Holds) != found) r = CaseResult::Fail;
  return outcome(r, detail, problem_to_json(p));
}

inline nlohmann::ordered_json raw_matrix_json(const CMatrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", matrix_to_json(m)}};
}

/// Penrose identities, eigen-reconstruction and psd_sqrt squaring, relative 1e-9,
/// over square, tall, wide and rank-deficient shapes.
inline CaseOutcome kernel_roundtrip(std::size_t n, std::uint64_t seed, const SuiteConfig&) {
  std::mt19937_64 rng(seed);
  const double tol = 1e-9;
  std::string bad;
  nlohmann::ordered_json inst = nlohmann::ordered_json::object();

  auto rel = [](const CMatrix& diff, const CMatrix& ref) {
    return frobenius_norm(diff) / std::max(1e-300, frobenius_norm(ref));
  };
  const std::size_t half = std::max<std::size_t>(1, n / 2);
  const std::array<std::pair<std::string, CMatrix>, 4> shapes = {{
      {"square", complex_gaussian(n, n, rng)},
      {"tall", complex_gaussian(n + 2, n, rng)},
      {"wide", complex_gaussian(n, n + 2, rng)},
      {"rank-deficient", complex_gaussian(n, half, rng) * complex_gaussian(half, n, rng)},
  }};
  for (const auto& [name, m] : shapes) {
    const CMatrix x = pinv(m);
    const CMatrix mx = m * x, xm = x * m;
    const double e = std::max({rel(m * x * m - m, m), rel(x * m * x - x, x), rel(mx - mx.adjoint(), mx),
                               rel(xm - xm.adjoint(), xm)});
    if (!(e <= tol)) {
      bad += " penrose/" + name + "=" + fmt(e);
      inst[name] = raw_matrix_json(m);
    }
  }
  const CMatrix h = hermitian_part(shapes[0].second);
  const EigDecomp eig = herm_eig(h);
  std::vector<cplx> d(eig.values.begin(), eig.values.end());
  const double e_eig = rel(eig.vectors * CMatrix::diagonal(d) * eig.vectors.adjoint() - h, h);
  if (!(e_eig <= tol)) {
    bad += " eig=" + fmt(e_eig);
    inst["hermitian"] = raw_matrix_json(h);
  }
  for (const auto* src : {&shapes[0].second, &shapes[3].second}) {
    const CMatrix psd = hermitian_part(src->adjoint() * *src);
    const CMatrix r = psd_sqrt(psd);
    const double e_sqrt = rel(r * r - psd, psd);
    if (!(e_sqrt <= tol)) {
      bad += " sqrt=" + fmt(e_sqrt);
      inst["psd"] = raw_matrix_json(psd);
    }
  }
  return outcome(bad.empty() ? CaseResult::Pass : CaseResult::Fail, bad.empty() ? "ok" : bad.substr(1), inst);
}

inline const std::vector<Property>& registry() {
  static const std::vector<Property> props = {
      {"bj-agreement", bj_agreement},
      {"shift-equivalence", shift_equivalence},
      {"seminorm-sandwich", seminorm_sandwich},
      {"sharp-isometry", sharp_isometry},
      {"sharp-involution", sharp_involution},
      {"nilpotent-half-norm", nilpotent_half_norm},
      {"shift-radius", shift_radius},
      {"verdict-invariance", verdict_invariance},
      {"magajna", magajna},
      {"kernel-roundtrip", kernel_roundtrip},
  };
  return props;
}

}  // namespace detail

inline std::vector<std::string> property_names() {
  std::vector<std::string> out;
  for (const auto& p : detail::registry()) out.emplace_back(p.name);
  return out;
}

/// Seed of case `index` at dimension `dim` for property number `prop`.
constexpr std::uint64_t case_seed(std::uint64_t base, std::size_t prop, std::size_t dim, std::size_t index) {
  return splitmix64(base ^ splitmix64((static_cast<std::uint64_t>(prop) << 48) ^
                                      (static_cast<std::uint64_t>(dim) << 32) ^ index));
}

inline SuiteReport property_suite(const SuiteConfig& cfg) {
  if (cfg.count == 0) throw Error(Errc::BadSpec, "count must be >= 1");
  for (std::size_t n : cfg.dims)
    if (n < 2) throw Error(Errc::BadSpec, "suite dimensions must be >= 2");
  for (const auto& name : cfg.properties) {
    const auto names = property_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw Error(Errc::BadSpec, "unknown property '" + name + "'");
    }
  }
  const detail::Stopwatch total;
  SuiteReport rep;
  const auto& props = detail::registry();
  for (std::size_t pi = 0; pi < props.size(); ++pi) {
    const auto& prop = props[pi];
    if (!cfg.properties.empty() &&
        std::find(cfg.properties.begin(), cfg.properties.end(), prop.name) == cfg.properties.end()) {
      continue;
    }
    const detail::Stopwatch clock;
    PropertyStats stats;
    stats.name = prop.name;
    for (std::size_t n : cfg.dims) {
      for (std::size_t i = 0; i < cfg.count; ++i) {
        const std::uint64_t seed = case_seed(cfg.seed, pi, n, i);
        CaseOutcome out;
        try {
          out = prop.run(n, seed, cfg);
        } catch (const Error& e) {
          out = detail::outcome(CaseResult::Fail, std::string("error: ") + e.what());
        }
        switch (out.result) {
          case CaseResult::Pass: ++stats.pass; break;
          case CaseResult::Inconclusive: ++stats.inconclusive; break;
          case CaseResult::Fail:
            ++stats.fail;
            if (stats.failures.size() < detail::kMaxRecordedFailures) {
              stats.failures.push_back({n, i, seed, out.detail, std::move(out.instance)});
            }
            break;
        }
      }
    }
    stats.seconds = clock.seconds();
    rep.properties.push_back(std::move(stats));
  }
  rep.seconds = total.seconds();
  return rep;
}

inline nlohmann::ordered_json suite_to_json(const SuiteReport& r, bool include_timing = true) {
  using detail::ojson;
  ojson j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = std::string(kToolVersion);
  j["passed"] = r.passed();
  ojson props = ojson::array();
  for (const auto& p : r.properties) {
    ojson e;
    e["name"] = p.name;
    e["pass"] = p.pass;
    e["fail"] = p.fail;
    e["inconclusive"] = p.inconclusive;
    ojson fails = ojson::array();
    for (const auto& f : p.failures) {
      fails.push_back(ojson{{"dim", f.dim}, {"index", f.index}, {"seed", f.seed}, {"detail", f.detail},
                            {"instance", f.instance}});
    }
    e["failures"] = std::move(fails);
    if (include_timing) e["seconds"] = p.seconds;
    props.push_back(std::move(e));
  }
  j["properties"] = std::move(props);
  if (include_timing) j["seconds"] = r.seconds;
  return j;
}

}  // namespace shs
