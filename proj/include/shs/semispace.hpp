#pragma once

// Semi-Hilbert structure induced by a positive semidefinite A:
// <x, y>_A = <Ax, y>, the seminorm ||x||_A, the projector P_A onto range(A),
// operator classes and the reduced solution of A X = T* A.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "shs/densela.hpp"

namespace shs {

/// Tolerance policy shared by every computation on one context.
struct Tolerances {
  double rank_tol = kDefaultRankTol;  // relative eigenvalue cutoff for range(A)
  double tol = kDefaultTol;           // generic algebraic checks
  double cluster_tol = 1e-8;          // relative width of a maximal singular/eigen cluster
  double decision_tol = 1e-7;         // absolute margin band for Inconclusive verdicts

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

/// A validated PSD weight with everything derived from one eigendecomposition.
/// Build with make_context(); treat as immutable afterwards.
struct AContext {
  std::size_t dim = 0;
  CMatrix A;            // Hermitian part of the input, PSD dust clamped
  CMatrix A_half;       // A^{1/2}
  CMatrix A_half_pinv;  // (A^{1/2})^+
  CMatrix A_pinv;       // A^+
  CMatrix P_A;          // orthogonal projector onto range(A)
  CMatrix range_basis;  // dim x rank, orthonormal columns spanning range(A)
  std::size_t rank = 0;
  Tolerances tols;
};

struct OperatorClass {
  bool a_bounded = false;      // T in B_{A^{1/2}}
  bool a_adjointable = false;  // T in B_A
  bool a_positive = false;     // AT >= 0
};

inline AContext make_context(const CMatrix& a, const Tolerances& tols = {}) {
  if (!a.is_square() || a.rows() == 0) throw Error(Errc::DimMismatch, "A must be square");
  if (frobenius_norm(a) == 0.0) throw Error(Errc::ZeroA, "A must be non-zero");
  const EigDecomp e = herm_eig(a, tols.tol);
  const std::size_t n = a.rows();
  const double scale = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
  if (e.values.back() < -tols.rank_tol * scale) {
    throw Error(Errc::NotPSD, "A has eigenvalue " + std::to_string(e.values.back()));
  }
  if (e.values.front() <= 0.0) throw Error(Errc::ZeroA, "A has no positive eigenvalue");

  const double cutoff = tols.rank_tol * e.values.front();
  std::size_t rank = 0;
  while (rank < n && e.values[rank] > cutoff) ++rank;

  AContext ctx;
  ctx.dim = n;
  ctx.rank = rank;
  ctx.tols = tols;
  ctx.range_basis = e.vectors.columns(0, rank);
  ctx.A = CMatrix(n, n);
  ctx.A_half = CMatrix(n, n);
  ctx.A_half_pinv = CMatrix(n, n);
  ctx.A_pinv = CMatrix(n, n);
  ctx.P_A = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = std::max(e.values[k], 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const cplx outer = e.vectors(i, k) * std::conj(e.vectors(j, k));
        ctx.A(i, j) += lam * outer;
        if (k < rank) {
          const double root = std::sqrt(lam);
          ctx.A_half(i, j) += root * outer;
          ctx.A_half_pinv(i, j) += outer / root;
          ctx.A_pinv(i, j) += outer / lam;
          ctx.P_A(i, j) += outer;
        }
      }
  }
  return ctx;
}

namespace detail {

inline void require_vec(const AContext& ctx, std::span<const cplx> x) {
  if (x.size() != ctx.dim) throw Error(Errc::DimMismatch, "vector length must equal dim");
}

inline void require_op(const AContext& ctx, const CMatrix& t) {
  if (t.rows() != ctx.dim || t.cols() != ctx.dim) {
    throw Error(Errc::DimMismatch, "operator must be dim x dim");
  }
}

inline CMatrix complement(const AContext& ctx) { return CMatrix::identity(ctx.dim) - ctx.P_A; }

/// ||A^{1/2} T (I - P_A)||_F small relative to ||A^{1/2} T||_F.
inline bool a_bounded(const AContext& ctx, const CMatrix& t) {
  const CMatrix ht = ctx.A_half * t;
  return frobenius_norm(ht * complement(ctx)) <= ctx.tols.tol * (1.0 + frobenius_norm(ht));
}

}  // namespace detail

/// <x, y>_A, linear in x and conjugate-linear in y.
inline cplx inner_a(const AContext& ctx, std::span<const cplx> x, std::span<const cplx> y) {
  detail::require_vec(ctx, x);
  detail::require_vec(ctx, y);
  return vdot(y, ctx.A * x);
}

inline double seminorm_vec(const AContext& ctx, std::span<const cplx> x) {
  detail::require_vec(ctx, x);
  return norm2(ctx.A_half * x);
}

inline OperatorClass classify(const AContext& ctx, const CMatrix& t) {
  detail::require_op(ctx, t);
  const auto& tol = ctx.tols.tol;
  OperatorClass cls;
  cls.a_bounded = detail::a_bounded(ctx, t);

  const CMatrix tsa = t.adjoint() * ctx.A;
  cls.a_adjointable = cls.a_bounded && frobenius_norm(detail::complement(ctx) * tsa) <=
                                           tol * (1.0 + frobenius_norm(tsa));

  const CMatrix at = ctx.A * t;
  const double at_norm = frobenius_norm(at);
  if (cls.a_adjointable && frobenius_norm(at - at.adjoint()) <= tol * (1.0 + at_norm)) {
    const auto vals = herm_eigvals(hermitian_part(at));
    cls.a_positive = vals.back() >= -tol * (1.0 + at_norm);
  }
  return cls;
}

/// Reduced solution T^{#A} = A^+ T* A of A X = T* A, with range inside range(A).
inline CMatrix sharp_adjoint(const AContext& ctx, const CMatrix& t) {
  detail::require_op(ctx, t);
  if (!classify(ctx, t).a_adjointable) {
    throw Error(Errc::NotAdjointable, "range(T*A) is not contained in range(A)");
  }
  const CMatrix tsa = t.adjoint() * ctx.A;
  CMatrix x = ctx.A_pinv * tsa;
  const double tol = ctx.tols.tol;
  const double scale = 1.0 + frobenius_norm(tsa);
  if (frobenius_norm(ctx.A * x - tsa) > tol * scale * std::max(1.0, frobenius_norm(x))) {
    throw Error(Errc::NumericalFailure, "A X = T* A residual above tolerance");
  }
  if (frobenius_norm(ctx.P_A * x - x) > tol * (1.0 + frobenius_norm(x))) {
    throw Error(Errc::NumericalFailure, "reduced solution leaks outside range(A)");
  }
  return x;
}

inline CMatrix project_pa(const AContext& ctx, const CMatrix& t) {
  detail::require_op(ctx, t);
  return ctx.P_A * t;
}

}  // namespace shs
