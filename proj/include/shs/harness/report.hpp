#pragma once

// Full analysis of one problem file, serialized as JSON with a stable key order.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "shs/error.hpp"
#include "shs/gauges.hpp"
#include "shs/harness/problem.hpp"
#include "shs/ortho.hpp"

namespace shs {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "0.3.0";

enum class Decision { Bj, BjDirect, BjAlpha, WbjDirect, WbjAlpha, ShiftEquivalence };

inline constexpr Decision kAllDecisions[] = {Decision::Bj,        Decision::BjDirect,
                                             Decision::BjAlpha,   Decision::WbjDirect,
                                             Decision::WbjAlpha,  Decision::ShiftEquivalence};

constexpr std::string_view to_string(Decision d) noexcept {
  switch (d) {
    case Decision::Bj: return "bj";
    case Decision::BjDirect: return "bj-direct";
    case Decision::BjAlpha: return "bj-alpha";
    case Decision::WbjDirect: return "wbj-direct";
    case Decision::WbjAlpha: return "wbj-alpha";
    case Decision::ShiftEquivalence: return "shift-equivalence";
  }
  return "?";
}

inline Decision parse_decision(std::string_view name) {
  for (Decision d : kAllDecisions)
    if (to_string(d) == name) return d;
  throw Error(Errc::ValidationError, "unknown decision '" + std::string(name) + "'");
}

struct DecisionOutcome {
  Decision decision = Decision::Bj;
  // One verdict per decision; shift-equivalence gives (T, S) then (T + I, S).
  std::vector<Verdict> verdicts;
  std::optional<bool> statuses_equal;  // shift-equivalence only
  std::optional<Errc> error;
  std::string error_message;
  double seconds = 0.0;
};

struct WSetSummary {
  double distance = 0.0;           // dist(0, W_A(T, S))
  double radius = 0.0;             // eps ||T||_A ||S||_A
  double critical_epsilon = 0.0;   // d / (||T||_A ||S||_A)
  std::size_t attain_dim = 0;      // dimension of the maximal singular subspace
};

struct Report {
  std::optional<std::string> label;
  std::size_t dim = 0;
  double epsilon = 0.0;
  std::size_t rank_a = 0;
  std::optional<GaugeReport> gauge_t, gauge_s;
  std::string gauge_t_error, gauge_s_error;
  std::optional<WSetSummary> wset;
  std::string wset_error;
  std::vector<DecisionOutcome> decisions;
  std::string input_digest;
  double seconds = 0.0;
};

/// FNV-1a, 64 bit, rendered as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string problem_digest(const ProblemFile& p) { return fnv1a_hex(problem_to_json(p).dump()); }

/// Numerical failures map to exit status 2, everything else about the input to 1.
constexpr bool is_numerical(Errc code) noexcept {
  return code == Errc::NoConvergence || code == Errc::NumericalFailure;
}

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline DecisionOutcome run_decision(const AContext& ctx, const ProblemFile& p, Decision d) {
  DecisionOutcome out;
  out.decision = d;
  const Stopwatch clock;
  const GridSpec grid = effective_grid(p);
  try {
    switch (d) {
      case Decision::Bj: out.verdicts.push_back(decide_bj(ctx, p.T, p.S, p.epsilon)); break;
      case Decision::BjDirect: out.verdicts.push_back(decide_bj_direct(ctx, p.T, p.S, p.epsilon, grid)); break;
      case Decision::BjAlpha: out.verdicts.push_back(decide_bj_alpha(ctx, p.T, p.S, p.epsilon)); break;
      case Decision::WbjDirect: out.verdicts.push_back(decide_wbj_direct(ctx, p.T, p.S, p.epsilon, grid)); break;
      case Decision::WbjAlpha: out.verdicts.push_back(decide_wbj_alpha(ctx, p.T, p.S, p.epsilon)); break;
      case Decision::ShiftEquivalence: {
        auto [plain, shifted] = shift_equivalence_check(ctx, p.T, p.S, p.epsilon, grid);
        out.statuses_equal = plain.status == shifted.status;
        out.verdicts = {std::move(plain), std::move(shifted)};
        break;
      }
    }
  } catch (const Error& e) {
    out.verdicts.clear();
    out.statuses_equal.reset();
    out.error = e.code();
    out.error_message = e.what();
  }
  out.seconds = clock.seconds();
  return out;
}

}  // namespace detail

/// Gauges, W-set summary and the requested decisions. Errors inside one part are
/// recorded there; only an invalid weight A aborts the whole report.
inline Report run_report(const ProblemFile& p, const std::vector<Decision>& decisions) {
  const detail::Stopwatch clock;
  const AContext ctx = make_context(p.A, effective_tolerances(p));
  Report r;
  r.label = p.label;
  r.dim = p.dim;
  r.epsilon = p.epsilon;
  r.rank_a = ctx.rank;
  r.input_digest = problem_digest(p);

  auto gauge = [&](const CMatrix& op, std::optional<GaugeReport>& slot, std::string& err) {
    try {
      slot = gauge_report(ctx, op);
    } catch (const Error& e) {
      err = e.what();
    }
  };
  gauge(p.T, r.gauge_t, r.gauge_t_error);
  gauge(p.S, r.gauge_s, r.gauge_s_error);

  if (r.gauge_t && r.gauge_s) {
    try {
      const WSet w = wset(ctx, p.T, p.S);
      WSetSummary sum;
      sum.distance = nr_distance_to_origin(w);
      sum.radius = p.epsilon * r.gauge_t->op_seminorm * r.gauge_s->op_seminorm;
      sum.critical_epsilon = critical_epsilon(ctx, p.T, p.S);
      sum.attain_dim = w.C.rows();
      r.wset = sum;
    } catch (const Error& e) {
      r.wset_error = e.what();
    }
  } else {
    r.wset_error = "gauges unavailable";
  }

  std::set<Decision> seen;
  for (Decision d : decisions)
    if (seen.insert(d).second) r.decisions.push_back(detail::run_decision(ctx, p, d));
  r.seconds = clock.seconds();
  return r;
}

namespace detail {

inline ojson complex_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

inline ojson vector_json(std::span<const cplx> v) {
  ojson out = ojson::array();
  for (const cplx& z : v) out.push_back(complex_json(z));
  return out;
}

inline ojson class_json(const OperatorClass& c) {
  return ojson{{"a_bounded", c.a_bounded}, {"a_adjointable", c.a_adjointable}, {"a_positive", c.a_positive}};
}

inline ojson gauge_json(const std::optional<GaugeReport>& g, const std::string& err) {
  if (!g) return ojson{{"error", err}};
  return ojson{{"op_seminorm", g->op_seminorm},
               {"num_radius", g->num_radius},
               {"attain_dim", g->attain_basis.cols()},
               {"radius_argmax", vector_json(g->radius_argmax)},
               {"class", class_json(g->cls)}};
}

}  // namespace detail

inline nlohmann::ordered_json verdict_to_json(const Verdict& v) {
  using detail::ojson;
  ojson j;
  j["status"] = to_string(v.status);
  j["method"] = to_string(v.method);
  j["margin"] = v.margin;
  j["witness"] = v.witness ? detail::complex_json(*v.witness) : ojson(nullptr);
  if (!v.witness_vector.empty()) j["witness_vector"] = detail::vector_json(v.witness_vector);
  j["grid_certified"] = v.grid_certified;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

/// Identical inputs give byte-identical output when include_timing is false.
inline nlohmann::ordered_json report_to_json(const Report& r, bool include_timing = true) {
  using detail::ojson;
  ojson j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = std::string(kToolVersion);
  j["input_digest"] = r.input_digest;
  j["label"] = r.label ? ojson(*r.label) : ojson(nullptr);
  j["dim"] = r.dim;
  j["epsilon"] = r.epsilon;
  j["rank_a"] = r.rank_a;
  j["gauges"] = ojson{{"T", detail::gauge_json(r.gauge_t, r.gauge_t_error)},
                      {"S", detail::gauge_json(r.gauge_s, r.gauge_s_error)}};
  if (r.wset) {
    j["wset"] = ojson{{"distance", r.wset->distance},
                      {"radius", r.wset->radius},
                      {"critical_epsilon", r.wset->critical_epsilon},
                      {"attain_dim", r.wset->attain_dim}};
  } else {
    j["wset"] = ojson{{"error", r.wset_error}};
  }
  ojson ds = ojson::array();
  for (const auto& d : r.decisions) {
    ojson e;
    e["decision"] = std::string(to_string(d.decision));
    if (d.error) {
      e["error"] = ojson{{"code", std::string(to_string(*d.error))}, {"message", d.error_message}};
    } else {
      ojson vs = ojson::array();
      for (const auto& v : d.verdicts) vs.push_back(verdict_to_json(v));
      e["verdicts"] = std::move(vs);
      if (d.statuses_equal) e["statuses_equal"] = *d.statuses_equal;
    }
    if (include_timing) e["seconds"] = d.seconds;
    ds.push_back(std::move(e));
  }
  j["decisions"] = std::move(ds);
  if (include_timing) j["seconds"] = r.seconds;
  return j;
}

/// 0 when every decision resolved, otherwise 2 for numerical failures and 1 for the rest.
inline int report_exit_code(const Report& r) {
  int code = 0;
  for (const auto& d : r.decisions) {
    if (!d.error) continue;
    if (is_numerical(*d.error)) return 2;
    code = 1;
  }
  return code;
}

}  // namespace shs
