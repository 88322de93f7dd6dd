#pragma once

// Dense complex linear algebra for desk-scale matrices (n up to ~128):
// arithmetic, Hermitian eigendecomposition (cyclic Jacobi), SVD through the
// Gram matrix, Moore-Penrose pseudoinverse, PSD square root and numerical rank.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shs/error.hpp"

namespace shs {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kDefaultRankTol = 1e-10;

/// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;

  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(Errc::DimMismatch, "entry count " + std::to_string(data_.size()) +
                                         " does not match " + std::to_string(rows_) + "x" +
                                         std::to_string(cols_));
    }
    for (const auto& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(Errc::ValidationError, "non-finite matrix entry");
      }
    }
  }

  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw Error(Errc::DimMismatch, "ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
    for (const auto& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(Errc::ValidationError, "non-finite matrix entry");
      }
    }
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMatrix diagonal(std::span<const cplx> d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static CMatrix diagonal(std::initializer_list<cplx> d) {
    return diagonal(std::span<const cplx>(d.begin(), d.size()));
  }

  /// Matrix whose columns are the given vectors.
  static CMatrix from_columns(const std::vector<CVector>& cols, std::size_t rows) {
    CMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<const cplx> entries() const noexcept { return data_; }

  CVector column(std::size_t j) const {
    CVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_column(std::size_t j, std::span<const cplx> v) {
    if (v.size() != rows_) throw Error(Errc::DimMismatch, "column length");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  /// First `count` columns starting at `first`.
  CMatrix columns(std::size_t first, std::size_t count) const {
    CMatrix m(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
    return m;
  }

  CMatrix adjoint() const {
    CMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  CMatrix& operator+=(const CMatrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }

  CMatrix& operator-=(const CMatrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }

  CMatrix& operator*=(cplx s) noexcept {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  void check_same_shape(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(Errc::DimMismatch, "shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
inline CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
inline CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
inline CMatrix operator*(CMatrix a, cplx s) { return a *= s; }

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw Error(Errc::DimMismatch, "matrix product inner dimension");
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline CVector operator*(const CMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw Error(Errc::DimMismatch, "matrix-vector dimension");
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s{};
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline CVector operator*(const CMatrix& a, const CVector& x) {
  return a * std::span<const cplx>(x);
}

/// a* b (conjugate-linear in the first argument).
inline cplx vdot(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(Errc::DimMismatch, "vector length");
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double norm2(std::span<const cplx> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

inline double frobenius_norm(const CMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.entries()) s += std::norm(z);
  return std::sqrt(s);
}

/// (X + X*) / 2
inline CMatrix hermitian_part(const CMatrix& m) {
  if (!m.is_square()) throw Error(Errc::DimMismatch, "hermitian_part needs a square matrix");
  CMatrix h(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return h;
}

/// Hermitian part of e^{-i theta} C.
inline CMatrix rotated_hermitian_part(const CMatrix& c, double theta) {
  const cplx phase = std::polar(1.0, -theta);
  CMatrix h(c.rows(), c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j)
      h(i, j) = 0.5 * (phase * c(i, j) + std::conj(phase * c(j, i)));
  return h;
}

struct EigDecomp {
  std::vector<double> values;  // descending
  CMatrix vectors;             // orthonormal columns
};

struct Svd {
  std::vector<double> values;  // descending, nonnegative
  CMatrix U;
  CMatrix V;
};

namespace detail {

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiOffTol = 1e-13;

inline double off_diagonal_norm(const std::vector<cplx>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += std::norm(a[i * n + j]);
  return std::sqrt(s);
}

/// Cyclic complex Jacobi on the row-major Hermitian array `a`. On return the
/// diagonal of `a` holds the eigenvalues; `v` (if given) accumulates rotations.
inline void jacobi_in_place(std::vector<cplx>& a, std::size_t n, CMatrix* v) {
  double fro = 0.0;
  for (const auto& z : a) fro += std::norm(z);
  fro = std::sqrt(fro);
  const double target = kJacobiOffTol * fro;

  for (int sweep = 0;; ++sweep) {
    if (off_diagonal_norm(a, n) <= target) return;
    if (sweep == kJacobiMaxSweeps) {
      throw Error(Errc::NoConvergence, "Jacobi exceeded " + std::to_string(kJacobiMaxSweeps) +
                                           " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a[p * n + q];
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx e = apq / mag;
        const cplx ce = std::conj(e);
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const double theta = (aqq - app) / (2.0 * mag);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const cplx xp = a[k * n + p];
          const cplx xq = a[k * n + q];
          a[k * n + p] = c * xp - s * ce * xq;
          a[k * n + q] = s * xp + c * ce * xq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx xp = a[p * n + k];
          const cplx xq = a[q * n + k];
          a[p * n + k] = c * xp - s * e * xq;
          a[q * n + k] = s * xp + c * e * xq;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        a[p * n + p] = a[p * n + p].real();
        a[q * n + q] = a[q * n + q].real();

        if (v != nullptr) {
          for (std::size_t k = 0; k < n; ++k) {
            const cplx xp = (*v)(k, p);
            const cplx xq = (*v)(k, q);
            (*v)(k, p) = c * xp - s * ce * xq;
            (*v)(k, q) = s * xp + c * ce * xq;
          }
        }
      }
    }
  }
}

inline void require_hermitian(const CMatrix& h, double tol) {
  if (!h.is_square()) throw Error(Errc::DimMismatch, "Hermitian input must be square");
  double asym = 0.0;
  double fro = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) {
      asym += std::norm(h(i, j) - std::conj(h(j, i)));
      fro += std::norm(h(i, j));
    }
  if (std::sqrt(asym) > tol * std::sqrt(fro)) {
    throw Error(Errc::NotHermitian, "||H - H*||_F exceeds tol * ||H||_F");
  }
}

inline std::vector<cplx> symmetrized(const CMatrix& h) {
  const std::size_t n = h.rows();
  std::vector<cplx> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = 0.5 * (h(i, j) + std::conj(h(j, i)));
  return a;
}

// Modified Gram-Schmidt of `u` against the first `count` columns of `basis`,
// run twice. Returns the residual norm before normalization.
inline double orthonormalize_against(CVector& u, const CMatrix& basis, std::size_t count) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < count; ++j) {
      cplx proj{};
      for (std::size_t i = 0; i < u.size(); ++i) proj += std::conj(basis(i, j)) * u[i];
      for (std::size_t i = 0; i < u.size(); ++i) u[i] -= proj * basis(i, j);
    }
  }
  const double nrm = norm2(u);
  if (nrm > 0.0)
    for (auto& z : u) z /= nrm;
  return nrm;
}

}  // namespace detail

namespace detail {

/// Reduces Hermitian `a` (row-major, n x n, destroyed) to a real symmetric
/// tridiagonal with diagonal d and off-diagonal e (e[i] couples i, i+1; e[n-1] = 0).
/// Off-diagonal phases are dropped: a diagonal unitary similarity makes them real.
inline void householder_tridiagonal(std::vector<cplx>& a, std::size_t n, std::vector<double>& d,
                                    std::vector<double>& e) {
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  std::vector<cplx> v(n), p(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(a[i * n + k]);
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const cplx x0 = a[(k + 1) * n + k];
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);
    const cplx alpha = -phase * xnorm;
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a[i * n + k] - (i == k + 1 ? alpha : cplx(0.0));
      vnorm += std::norm(v[i]);
    }
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

    // B <- H B H = B - 2 (v w* + w v*), with p = B v, w = p - (v* p) v.
    cplx kappa = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      cplx acc = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) acc += a[i * n + j] * v[j];
      p[i] = acc;
      kappa += std::conj(v[i]) * acc;
    }
    for (std::size_t i = k + 1; i < n; ++i) w[i] = p[i] - kappa.real() * v[i];
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i * n + j] -= 2.0 * (v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]));

    a[(k + 1) * n + k] = alpha;
    a[k * n + k + 1] = std::conj(alpha);
    for (std::size_t i = k + 2; i < n; ++i) a[i * n + k] = a[k * n + i] = 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i * n + i].real();
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = std::abs(a[(i + 1) * n + i]);
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL.
inline void implicit_ql(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw Error(Errc::NoConvergence, "tridiagonal QL exceeded 60 iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          e[i + 1] = r = std::hypot(f, g);
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
inline EigDecomp herm_eig(const CMatrix& h, double tol = kDefaultTol) {
  detail::require_hermitian(h, tol);
  const std::size_t n = h.rows();
  auto a = detail::symmetrized(h);
  CMatrix v = CMatrix::identity(n);
  detail::jacobi_in_place(a, n, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x].real() > a[y * n + y].real();
  });
  EigDecomp out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[order[k] * n + order[k]].real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Eigenvalues only, descending. Skips the Hermitian check; callers pass
/// matrices that are Hermitian by construction.
inline std::vector<double> herm_eigvals(const CMatrix& h) {
  const std::size_t n = h.rows();
  if (n == 1) return {h(0, 0).real()};
  if (n == 2) {
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const double half = 0.5 * (a - d);
    const double r = std::hypot(half, std::abs(0.5 * (h(0, 1) + std::conj(h(1, 0)))));
    const double mid = 0.5 * (a + d);
    return {mid + r, mid - r};
  }
  auto a = detail::symmetrized(h);
  std::vector<double> d, e;
  detail::householder_tridiagonal(a, n, d, e);
  detail::implicit_ql(d, e);
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

/// Thin SVD: for an m x n input, U is m x k, V is n x k with k = min(m, n).
inline Svd svd(const CMatrix& m, double tol = kDefaultTol) {
  if (m.rows() < m.cols()) {
    Svd t = svd(m.adjoint(), tol);
    return Svd{std::move(t.values), std::move(t.V), std::move(t.U)};
  }
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  EigDecomp gram = herm_eig(m.adjoint() * m, 1.0);

  // Singular values re-estimated as ||M v_i||, which stays accurate for small sigma.
  std::vector<CVector> mv(n);
  std::vector<double> sigma(n);
  for (std::size_t k = 0; k < n; ++k) {
    mv[k] = m * gram.vectors.column(k);
    sigma[k] = norm2(mv[k]);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Svd out{std::vector<double>(n), CMatrix(rows, n), CMatrix(n, n)};
  const double smax = n == 0 ? 0.0 : sigma[order[0]];
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = sigma[src];
    for (std::size_t i = 0; i < n; ++i) out.V(i, k) = gram.vectors(i, src);

    CVector u(rows);
    bool recovered = false;
    if (sigma[src] > 1e-14 * smax && sigma[src] > 0.0) {
      for (std::size_t i = 0; i < rows; ++i) u[i] = mv[src][i] / sigma[src];
      recovered = detail::orthonormalize_against(u, out.U, k) > 0.5;
    }
    if (!recovered) {
      // Null completion: best-conditioned standard basis vector.
      double best = -1.0;
      CVector best_u;
      for (std::size_t j = 0; j < rows; ++j) {
        CVector e(rows);
        e[j] = 1.0;
        const double r = detail::orthonormalize_against(e, out.U, k);
        if (r > best) {
          best = r;
          best_u = std::move(e);
        }
      }
      u = std::move(best_u);
    }
    out.U.set_column(k, u);
  }
  return out;
}

/// Moore-Penrose pseudoinverse; singular values <= rank_tol * sigma_max count as zero.
inline CMatrix pinv(const CMatrix& m, double rank_tol = kDefaultRankTol) {
  CMatrix out(m.cols(), m.rows());
  const Svd s = svd(m);
  if (s.values.empty() || s.values.front() == 0.0) return out;
  const double cutoff = rank_tol * s.values.front();
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    if (s.values[k] <= cutoff) break;
    const double inv = 1.0 / s.values[k];
    for (std::size_t i = 0; i < out.rows(); ++i)
      for (std::size_t j = 0; j < out.cols(); ++j)
        out(i, j) += inv * s.V(i, k) * std::conj(s.U(j, k));
  }
  return out;
}

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [-tol*||P||, 0) are clamped to zero; anything more negative is rejected.
inline CMatrix psd_sqrt(const CMatrix& p, double tol = kDefaultTol) {
  const EigDecomp e = herm_eig(p, tol);
  const std::size_t n = p.rows();
  if (n == 0) return CMatrix{};
  const double scale = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
  if (e.values.back() < -tol * scale) {
    throw Error(Errc::NotPSD, "lambda_min = " + std::to_string(e.values.back()));
  }
  CMatrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double root = std::sqrt(std::max(e.values[k], 0.0));
    if (root == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        r(i, j) += root * e.vectors(i, k) * std::conj(e.vectors(j, k));
  }
  return r;
}

/// Number of singular values above rank_tol * sigma_max.
inline std::size_t rank_of(const CMatrix& m, double rank_tol = kDefaultRankTol) {
  const Svd s = svd(m);
  if (s.values.empty() || s.values.front() == 0.0) return 0;
  const double cutoff = rank_tol * s.values.front();
  return static_cast<std::size_t>(std::count_if(s.values.begin(), s.values.end(),
                                                [&](double v) { return v > cutoff; }));
}

}  // namespace shs
