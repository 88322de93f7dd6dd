#pragma once

// Approximate Birkhoff-James orthogonality in a semi-Hilbert space.
//
// With M, N the A^{1/2}-transforms of T, S (compressed to range(A)) and B an
// orthonormal basis of the maximal right-singular subspace of M, the set
// W_A(T, S) of limits of <Sx, Tx>_A over norm-attaining A-unit x is the
// numerical range of C = B* M* N B. T is (eps, A)-orthogonal to S exactly when
// W(C) meets the closed disc of radius eps ||T||_A ||S||_A, i.e. when
//   d = max(0, max_theta lambda_min(Re(e^{-i theta} C))) <= eps ||T||_A ||S||_A.
//
// Every decision is returned as a ternary Verdict with a signed margin in the
// units of ||T||_A ||S||_A (or w_A(T) w_A(S) for the numerical-radius variant).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shs/densela.hpp"
#include "shs/detail/angles.hpp"
#include "shs/gauges.hpp"
#include "shs/semispace.hpp"

namespace shs {

enum class Status { Holds, Fails, Inconclusive };
enum class Method { WSetCriterion, DirectOracle, AlphaSequence };

constexpr const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::Holds: return "Holds";
    case Status::Fails: return "Fails";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

constexpr const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::WSetCriterion: return "WSetCriterion";
    case Method::DirectOracle: return "DirectOracle";
    case Method::AlphaSequence: return "AlphaSequence";
  }
  return "?";
}

struct Verdict {
  Status status = Status::Inconclusive;
  double margin = 0.0;
  // WSetCriterion: point of W nearest the origin. DirectOracle: the lambda tested
  // (a violating lambda when Fails). AlphaSequence: e^{i alpha} of the worst angle.
  std::optional<cplx> witness;
  CVector witness_vector;  // WSetCriterion: attaining A-unit x realizing the witness
  Method method = Method::WSetCriterion;
  bool grid_certified = false;  // Holds only established on the sampled grid
  std::string note;
};

/// Sampling parameters of the direct (definition-level) oracles.
struct GridSpec {
  double radius_lo = 1e-6;  // relative to ||T||_A / ||S||_A
  double radius_hi = 1e3;
  std::size_t radii = 24;
  std::size_t angles = 128;
  std::size_t descent_steps = 200;
  std::size_t radius_samples = 32;  // theta grid for each w_A evaluation

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct SupportSample {
  double theta = 0.0;
  double value = 0.0;
};

struct WSet {
  CMatrix C;                                // W(C) = W_A(T, S)
  std::vector<SupportSample> support;       // h(theta) = lambda_max(Re(e^{-i theta} C))
  std::vector<SupportSample> antisupport;   // m(theta) = lambda_min(Re(e^{-i theta} C))
};

namespace detail {

inline constexpr std::size_t kAlphaSamples = 256;

inline void check_epsilon(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw Error(Errc::BadEpsilon, "epsilon must lie in [0, 1), got " + std::to_string(eps));
  }
}

inline Status classify_margin(double margin, double scale, const Tolerances& tols) {
  const double noise = tols.tol * (1.0 + scale);
  if (margin >= -noise) return Status::Holds;
  if (margin < -tols.decision_tol) return Status::Fails;
  return Status::Inconclusive;
}

inline double lambda_max_of_gram(const CMatrix& x) {
  return herm_eigvals(x.adjoint() * x).front();
}

struct PairGeometry {
  CMatrix M;  // compressed transform of T
  CMatrix N;  // compressed transform of S
  double norm_t = 0.0;
  double norm_s = 0.0;
  double zero_t = 0.0;
  double zero_s = 0.0;
};

inline PairGeometry pair_geometry(const AContext& ctx, const CMatrix& t, const CMatrix& s) {
  PairGeometry g;
  g.M = tilde(ctx, t).compressed;
  g.N = tilde(ctx, s).compressed;
  g.norm_t = std::sqrt(std::max(0.0, lambda_max_of_gram(g.M)));
  g.norm_s = std::sqrt(std::max(0.0, lambda_max_of_gram(g.N)));
  g.zero_t = zero_seminorm_tol(ctx, t);
  g.zero_s = zero_seminorm_tol(ctx, s);
  return g;
}

struct Compressed {
  CMatrix basis;  // attaining coordinates in range(A), rank x k
  CMatrix C;      // basis* M* N basis
};

inline Compressed compress(const PairGeometry& g, const AContext& ctx) {
  Compressed out;
  out.basis = attain_coords(g.M, ctx.tols.cluster_tol, g.zero_t);
  out.C = out.basis.adjoint() * g.M.adjoint() * g.N * out.basis;
  return out;
}

inline CMatrix compression(const PairGeometry& g, const AContext& ctx) { return compress(g, ctx).C; }

/// Unit eigenvector u for the extreme eigenvalue of Re(e^{-i theta} C); u* C u lies on the boundary of W(C).
inline CVector extreme_direction(const CMatrix& c, double theta, bool top) {
  const EigDecomp e = herm_eig(rotated_hermitian_part(c, theta), 1.0);
  return e.vectors.column(top ? 0 : c.rows() - 1);
}

inline cplx extreme_point(const CMatrix& c, double theta, bool top) {
  const CVector u = extreme_direction(c, theta, top);
  return vdot(u, c * u);
}

inline AnglePeak farthest_antisupport(const CMatrix& c) {
  return maximize_on_circle([&](double t) { return lambda_min_rotated(c, t); }, kRadiusSamples)
      .best;
}

inline Verdict short_circuit(Method method, const std::string& why) {
  Verdict v;
  v.status = Status::Holds;
  v.margin = 0.0;
  v.method = method;
  v.note = why;
  return v;
}

}  // namespace detail

inline WSet wset(const AContext& ctx, const CMatrix& t, const CMatrix& s) {
  const auto g = detail::pair_geometry(ctx, t, s);
  WSet w;
  w.C = detail::compression(g, ctx);
  const std::size_t n = detail::kRadiusSamples;
  w.support.reserve(n);
  w.antisupport.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = detail::kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    const auto vals = herm_eigvals(rotated_hermitian_part(w.C, theta));
    w.support.push_back({theta, vals.front()});
    w.antisupport.push_back({theta, vals.back()});
  }
  return w;
}

/// Euclidean distance from 0 to W(C); zero iff 0 lies in W(C).
inline double nr_distance_to_origin(const WSet& w) {
  return std::max(0.0, detail::farthest_antisupport(w.C).value);
}

/// min over theta of h(theta) - Re(e^{-i theta} p); nonnegative iff p lies in W(C).
inline double support_gap(const WSet& w, cplx p) {
  auto gap = [&](double t) {
    return detail::lambda_max_rotated(w.C, t) - (std::polar(1.0, -t) * p).real();
  };
  double worst = detail::minimize_on_circle(gap, detail::kRadiusSamples).best.value;
  for (const auto& s : w.support) worst = std::min(worst, s.value - (std::polar(1.0, -s.theta) * p).real());
  return worst;
}

/// Smallest eps for which T is (eps, A)-orthogonal to S: d / (||T||_A ||S||_A).
inline double critical_epsilon(const AContext& ctx, const CMatrix& t, const CMatrix& s) {
  const auto g = detail::pair_geometry(ctx, t, s);
  if (g.norm_t <= g.zero_t || g.norm_s <= g.zero_s) return 0.0;
  const CMatrix c = detail::compression(g, ctx);
  return std::max(0.0, detail::farthest_antisupport(c).value) / (g.norm_t * g.norm_s);
}

/// W-set criterion: Holds iff dist(0, W_A(T, S)) <= eps ||T||_A ||S||_A.
inline Verdict decide_bj(const AContext& ctx, const CMatrix& t, const CMatrix& s, double eps) {
  detail::check_epsilon(eps);
  const auto g = detail::pair_geometry(ctx, t, s);
  if (g.norm_t <= g.zero_t) return detail::short_circuit(Method::WSetCriterion, "||T||_A = 0");
  if (g.norm_s <= g.zero_s) return detail::short_circuit(Method::WSetCriterion, "||S||_A = 0");

  const auto comp = detail::compress(g, ctx);
  const auto peak = detail::farthest_antisupport(comp.C);
  const double d = std::max(0.0, peak.value);
  const double scale = g.norm_t * g.norm_s;
  const double r = eps * scale;

  Verdict v;
  v.method = Method::WSetCriterion;
  v.margin = r - d;
  v.status = detail::classify_margin(v.margin, scale, ctx.tols);
  const CVector u = detail::extreme_direction(comp.C, peak.theta, false);
  v.witness = vdot(u, comp.C * u);
  // A-unit attaining x with <Sx, Tx>_A equal to the witness point.
  v.witness_vector = ctx.A_half_pinv * (ctx.range_basis * (comp.basis * u));
  return v;
}

namespace detail {

struct DirectSearch {
  double q_min = 0.0;
  cplx lambda{};
};

// Grid over lambda = rho e^{i phi} followed by pattern-search descent in
// (log rho, phi) from the worst grid point.
template <class Q>
DirectSearch direct_search(Q&& q, double rho_scale, const GridSpec& grid) {
  const double u_lo = std::log(grid.radius_lo * rho_scale);
  const double u_hi = std::log(grid.radius_hi * rho_scale);
  const std::size_t nr = std::max<std::size_t>(grid.radii, 2);
  const std::size_t na = std::max<std::size_t>(grid.angles, 1);
  const double du = (u_hi - u_lo) / static_cast<double>(nr - 1);
  const double dphi = kTwoPi / static_cast<double>(na);

  auto eval = [&](double u, double phi) { return q(std::polar(std::exp(u), phi)); };

  double best = std::numeric_limits<double>::infinity();
  double bu = u_lo, bphi = 0.0;
  for (std::size_t i = 0; i < nr; ++i) {
    const double u = u_lo + du * static_cast<double>(i);
    for (std::size_t k = 0; k < na; ++k) {
      const double phi = dphi * static_cast<double>(k);
      const double val = eval(u, phi);
      if (val < best) {
        best = val;
        bu = u;
        bphi = phi;
      }
    }
  }

  double su = du, sphi = dphi;
  for (std::size_t it = 0; it < grid.descent_steps && (su > 1e-12 || sphi > 1e-12); ++it) {
    const std::pair<double, double> moves[4] = {
        {std::min(bu + su, u_hi), bphi}, {std::max(bu - su, u_lo), bphi},
        {bu, bphi + sphi}, {bu, bphi - sphi}};
    bool improved = false;
    for (const auto& [u, phi] : moves) {
      const double val = eval(u, phi);
      if (val < best) {
        best = val;
        bu = u;
        bphi = phi;
        improved = true;
      }
    }
    if (!improved) {
      su *= 0.5;
      sphi *= 0.5;
    }
  }
  return {best, std::polar(std::exp(bu), bphi)};
}

inline Verdict direct_verdict(const DirectSearch& found, const Tolerances& tols) {
  Verdict v;
  v.method = Method::DirectOracle;
  v.margin = found.q_min;
  v.witness = found.lambda;
  if (found.q_min < -tols.decision_tol) {
    v.status = Status::Fails;
  } else {
    v.status = Status::Holds;
    v.grid_certified = true;
  }
  return v;
}

}  // namespace detail

/// Definition-level falsifier: minimizes
///   q(lambda) = (||T + lambda S||_A^2 - ||T||_A^2 + 2 eps ||T||_A ||lambda S||_A) / (2 |lambda|)
/// over a lambda grid plus descent. Fails carries a violating lambda.
inline Verdict decide_bj_direct(const AContext& ctx, const CMatrix& t, const CMatrix& s,
                                double eps, const GridSpec& grid = {}) {
  detail::check_epsilon(eps);
  const auto g = detail::pair_geometry(ctx, t, s);
  if (g.norm_t <= g.zero_t) return detail::short_circuit(Method::DirectOracle, "||T||_A = 0");
  if (g.norm_s <= g.zero_s) return detail::short_circuit(Method::DirectOracle, "||S||_A = 0");

  const double t2 = detail::lambda_max_of_gram(g.M);
  const double slope = 2.0 * eps * g.norm_t * g.norm_s;
  auto q = [&](cplx lam) {
    const double rho = std::abs(lam);
    const CMatrix x = g.M + lam * g.N;
    return (detail::lambda_max_of_gram(x) - t2 + slope * rho) / (2.0 * rho);
  };
  return detail::direct_verdict(detail::direct_search(q, g.norm_t / g.norm_s, grid), ctx.tols);
}

/// Angle form: for each alpha, max over attaining x of Re(e^{-i alpha} <Tx, Sx>_A)
/// must reach -eps ||T||_A ||S||_A.
inline Verdict decide_bj_alpha(const AContext& ctx, const CMatrix& t, const CMatrix& s,
                               double eps) {
  detail::check_epsilon(eps);
  const auto g = detail::pair_geometry(ctx, t, s);
  if (g.norm_t <= g.zero_t) return detail::short_circuit(Method::AlphaSequence, "||T||_A = 0");
  if (g.norm_s <= g.zero_s) return detail::short_circuit(Method::AlphaSequence, "||S||_A = 0");

  // <Tx, Sx>_A = y* C* y on the attaining sphere.
  const CMatrix cstar = detail::compression(g, ctx).adjoint();
  const auto scan = detail::minimize_on_circle(
      [&](double a) { return detail::lambda_max_rotated(cstar, a); }, detail::kAlphaSamples);
  const double scale = g.norm_t * g.norm_s;

  Verdict v;
  v.method = Method::AlphaSequence;
  v.margin = scan.best.value + eps * scale;
  v.status = detail::classify_margin(v.margin, scale, ctx.tols);
  v.witness = std::polar(1.0, scan.best.theta);
  return v;
}

/// Definition-level falsifier for (eps, A)-numerical-radius orthogonality,
///   q(lambda) = (w_A^2(T + lambda S) - w_A^2(T) + 2 eps w_A(T) w_A(lambda S)) / (2 |lambda|).
inline Verdict decide_wbj_direct(const AContext& ctx, const CMatrix& t, const CMatrix& s,
                                 double eps, const GridSpec& grid = {}) {
  detail::check_epsilon(eps);
  const auto g = detail::pair_geometry(ctx, t, s);
  const std::size_t samples = grid.radius_samples;
  const double wt = detail::numerical_radius(g.M, samples);
  const double ws = detail::numerical_radius(g.N, samples);
  if (wt <= g.zero_t) return detail::short_circuit(Method::DirectOracle, "w_A(T) = 0");
  if (ws <= g.zero_s) return detail::short_circuit(Method::DirectOracle, "w_A(S) = 0");

  const double slope = 2.0 * eps * wt * ws;
  auto q = [&](cplx lam) {
    const double rho = std::abs(lam);
    const double w = detail::numerical_radius(g.M + lam * g.N, samples);
    return (w * w - wt * wt + slope * rho) / (2.0 * rho);
  };
  return detail::direct_verdict(detail::direct_search(q, wt / ws, grid), ctx.tols);
}

/// Angle form for the numerical-radius variant: for each alpha, the best
///   Re(e^{-i alpha} <Tx, x>_A <x, Sx>_A)
/// over x attaining w_A(T) must reach -eps w_A(T) w_A(S). The attaining set is
/// the union, over maximizing theta*, of unit spheres of the top eigenspace E of
/// Re(e^{-i theta*} M); on each piece the best value is
///   w_A(T) lambda_max(Re(e^{i(alpha - theta*)} E* N E)).
inline Verdict decide_wbj_alpha(const AContext& ctx, const CMatrix& t, const CMatrix& s,
                                double eps) {
  detail::check_epsilon(eps);
  const auto g = detail::pair_geometry(ctx, t, s);
  const auto scan = detail::scan_numerical_radius(g.M);
  const double wt = std::max(0.0, scan.best.value);
  const double ws = detail::numerical_radius(g.N);
  if (wt <= g.zero_t) return detail::short_circuit(Method::AlphaSequence, "w_A(T) = 0");
  if (ws <= g.zero_s) return detail::short_circuit(Method::AlphaSequence, "w_A(S) = 0");

  const double cluster = ctx.tols.cluster_tol;
  std::vector<double> thetas;
  for (const auto& p : scan.peaks)
    if (p.value >= (1.0 - cluster) * wt) thetas.push_back(p.theta);
  for (std::size_t i = 0; i < scan.values.size(); ++i)
    if (scan.values[i] >= (1.0 - cluster) * wt) thetas.push_back(scan.thetas[i]);

  struct Piece {
    double theta;
    CMatrix s_on_e;
  };
  std::vector<Piece> pieces;
  for (double th : thetas) {
    const EigDecomp e = herm_eig(rotated_hermitian_part(g.M, th), 1.0);
    std::size_t k = 1;
    while (k < e.values.size() && e.values[k] >= e.values.front() - cluster * wt) ++k;
    const CMatrix basis = e.vectors.columns(0, k);
    pieces.push_back({th, basis.adjoint() * g.N * basis});
  }

  auto best_at = [&](double alpha) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : pieces)
      best = std::max(best, wt * detail::lambda_max_rotated(p.s_on_e, p.theta - alpha));
    return best;
  };
  const auto worst = detail::minimize_on_circle(best_at, detail::kAlphaSamples);
  const double scale = wt * ws;

  Verdict v;
  v.method = Method::AlphaSequence;
  v.margin = worst.best.value + eps * scale;
  v.status = detail::classify_margin(v.margin, scale, ctx.tols);
  v.witness = std::polar(1.0, worst.best.theta);
  return v;
}

/// Decides (T, S) and (T + I, S) for numerical-radius orthogonality with the
/// direct method. Requires T to be A-positive.
inline std::pair<Verdict, Verdict> shift_equivalence_check(const AContext& ctx, const CMatrix& t,
                                                           const CMatrix& s, double eps,
                                                           const GridSpec& grid = {}) {
  detail::check_epsilon(eps);
  if (!classify(ctx, t).a_positive) throw Error(Errc::NotAPositive, "A T is not positive");
  return {decide_wbj_direct(ctx, t, s, eps, grid),
          decide_wbj_direct(ctx, t + CMatrix::identity(ctx.dim), s, eps, grid)};
}

}  // namespace shs
