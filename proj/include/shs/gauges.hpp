#pragma once

// Operator seminorm ||T||_A, A-numerical radius w_A(T) and the norm-attaining
// subspace, all computed on the transform M = A^{1/2} T (A^{1/2})^+ compressed
// to range(A). With y = A^{1/2} x the A-unit sphere becomes the ordinary unit
// sphere of range(A), so both suprema are matrix maxima.

#include <cmath>
#include <cstddef>

#include "shs/densela.hpp"
#include "shs/detail/angles.hpp"
#include "shs/semispace.hpp"

namespace shs {

struct TildeOp {
  CMatrix M;             // A^{1/2} T (A^{1/2})^+, dim x dim
  CMatrix domain_basis;  // range_basis of the context
  CMatrix compressed;    // V* M V, rank x rank
};

struct GaugeReport {
  double op_seminorm = 0.0;
  double num_radius = 0.0;
  CMatrix attain_basis;   // dim x k; empty when ||T||_A = 0
  CVector radius_argmax;  // unit vector in range(A)
  OperatorClass cls;
};

inline TildeOp tilde(const AContext& ctx, const CMatrix& t) {
  detail::require_op(ctx, t);
  if (!detail::a_bounded(ctx, t)) {
    throw Error(Errc::NotABounded, "T does not map ker(A) into ker(A)");
  }
  TildeOp op;
  op.M = ctx.A_half * t * ctx.A_half_pinv;
  op.domain_basis = ctx.range_basis;
  op.compressed = ctx.range_basis.adjoint() * op.M * ctx.range_basis;
  return op;
}

namespace detail {

inline constexpr std::size_t kRadiusSamples = 1024;

inline double lambda_max_rotated(const CMatrix& c, double theta) {
  return herm_eigvals(rotated_hermitian_part(c, theta)).front();
}

inline double lambda_min_rotated(const CMatrix& c, double theta) {
  return herm_eigvals(rotated_hermitian_part(c, theta)).back();
}

inline CircleScan scan_numerical_radius(const CMatrix& c, std::size_t samples = kRadiusSamples) {
  return maximize_on_circle([&](double t) { return lambda_max_rotated(c, t); }, samples);
}

/// Numerical radius of a square matrix: max over theta of lambda_max(Re(e^{-i theta} C)).
/// Only the value is needed here, and it is quadratic in the angle error, so the
/// refinement stops at a coarser angle tolerance than the argmax search.
inline double numerical_radius(const CMatrix& c, std::size_t samples = kRadiusSamples) {
  constexpr std::size_t kPeaks = 4;
  constexpr double kAngleTol = 1e-7;
  const auto scan = maximize_on_circle([&](double t) { return lambda_max_rotated(c, t); }, samples,
                                       kPeaks, kAngleTol);
  return std::max(0.0, scan.best.value);
}

inline double zero_seminorm_tol(const AContext& ctx, const CMatrix& t) {
  return ctx.tols.rank_tol * frobenius_norm(ctx.A_half) * frobenius_norm(t) *
         frobenius_norm(ctx.A_half_pinv);
}

/// Right-singular subspace of `compressed` for sigma >= (1 - cluster_tol) sigma_max,
/// in range coordinates (rank x k).
inline CMatrix attain_coords(const CMatrix& compressed, double cluster_tol, double zero_tol) {
  const Svd s = svd(compressed);
  const double smax = s.values.front();
  if (smax <= zero_tol) throw Error(Errc::ZeroSeminorm, "||T||_A = 0");
  std::size_t k = 0;
  while (k < s.values.size() && s.values[k] >= (1.0 - cluster_tol) * smax) ++k;
  return s.V.columns(0, k);
}

}  // namespace detail

inline double op_seminorm(const AContext& ctx, const CMatrix& t) {
  return svd(tilde(ctx, t).compressed).values.front();
}

inline double num_radius(const AContext& ctx, const CMatrix& t) {
  return detail::numerical_radius(tilde(ctx, t).compressed);
}

/// Orthonormal basis (dim x k, inside range(A)) of the directions y = A^{1/2} x
/// along which T attains ||T||_A.
inline CMatrix attain_basis(const AContext& ctx, const CMatrix& t) {
  const TildeOp op = tilde(ctx, t);
  return ctx.range_basis *
         detail::attain_coords(op.compressed, ctx.tols.cluster_tol, detail::zero_seminorm_tol(ctx, t));
}

inline GaugeReport gauge_report(const AContext& ctx, const CMatrix& t) {
  const TildeOp op = tilde(ctx, t);
  GaugeReport rep;
  rep.cls = classify(ctx, t);
  rep.op_seminorm = svd(op.compressed).values.front();

  const auto scan = detail::scan_numerical_radius(op.compressed);
  rep.num_radius = std::max(0.0, scan.best.value);
  const EigDecomp top = herm_eig(rotated_hermitian_part(op.compressed, scan.best.theta));
  rep.radius_argmax = ctx.range_basis * top.vectors.column(0);

  if (rep.op_seminorm > detail::zero_seminorm_tol(ctx, t)) {
    rep.attain_basis =
        ctx.range_basis * detail::attain_coords(op.compressed, ctx.tols.cluster_tol, 0.0);
  } else {
    rep.attain_basis = CMatrix(ctx.dim, 0);
  }
  return rep;
}

}  // namespace shs
