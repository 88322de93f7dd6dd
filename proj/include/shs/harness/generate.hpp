#pragma once

// Seeded random problem instances. gen_instance is a pure function of its spec.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "shs/densela.hpp"
#include "shs/error.hpp"
#include "shs/harness/problem.hpp"
#include "shs/semispace.hpp"

namespace shs {

enum class WeightKind { Identity, DiagonalWithZeros, RandomPsd };
enum class OperatorKind { Random, Diagonal, Nilpotent, APositive };

struct InstanceSpec {
  std::size_t dim = 2;
  WeightKind weight = WeightKind::Identity;
  std::size_t weight_param = 0;  // zero count k, or rank r
  OperatorKind t_kind = OperatorKind::Random;
  OperatorKind s_kind = OperatorKind::Random;
  std::uint64_t seed = 0;
  std::optional<double> epsilon;  // drawn from [0, 0.95) when absent
};

constexpr std::string_view to_string(OperatorKind k) noexcept {
  switch (k) {
    case OperatorKind::Random: return "random";
    case OperatorKind::Diagonal: return "diagonal";
    case OperatorKind::Nilpotent: return "nilpotent";
    case OperatorKind::APositive: return "a-positive";
  }
  return "?";
}

inline OperatorKind parse_operator_kind(std::string_view s) {
  for (OperatorKind k : {OperatorKind::Random, OperatorKind::Diagonal, OperatorKind::Nilpotent,
                         OperatorKind::APositive})
    if (to_string(k) == s) return k;
  throw Error(Errc::BadSpec, "unknown operator kind '" + std::string(s) + "'");
}

inline std::string weight_to_string(WeightKind k, std::size_t param) {
  switch (k) {
    case WeightKind::Identity: return "identity";
    case WeightKind::DiagonalWithZeros: return "diag-zeros:" + std::to_string(param);
    case WeightKind::RandomPsd: return "psd:" + std::to_string(param);
  }
  return "?";
}

/// "identity", "diag-zeros:k" or "psd:r".
inline std::pair<WeightKind, std::size_t> parse_weight(std::string_view s) {
  if (s == "identity") return {WeightKind::Identity, 0};
  auto with_count = [&](std::string_view prefix, WeightKind kind) -> std::optional<std::pair<WeightKind, std::size_t>> {
    if (!s.starts_with(prefix)) return std::nullopt;
    const std::string_view digits = s.substr(prefix.size());
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size()) {
      throw Error(Errc::BadSpec, "bad count in weight '" + std::string(s) + "'");
    }
    return std::pair{kind, value};
  };
  if (auto w = with_count("diag-zeros:", WeightKind::DiagonalWithZeros)) return *w;
  if (auto w = with_count("psd:", WeightKind::RandomPsd)) return *w;
  throw Error(Errc::BadSpec, "unknown weight '" + std::string(s) + "'");
}

namespace detail {

inline cplx complex_normal(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline CMatrix complex_gaussian(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  CMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = complex_normal(rng);
  return m;
}

/// Haar-like unitary: orthonormalized Gaussian columns.
inline CMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  for (;;) {
    const CMatrix g = complex_gaussian(n, n, rng);
    CMatrix q(n, n);
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      CVector v = g.column(j);
      ok = orthonormalize_against(v, q, j) > 1e-8;
      q.set_column(j, v);
    }
    if (ok) return q;
  }
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline CMatrix gen_weight(const InstanceSpec& spec, std::mt19937_64& rng) {
  const std::size_t n = spec.dim;
  switch (spec.weight) {
    case WeightKind::Identity: return CMatrix::identity(n);
    case WeightKind::DiagonalWithZeros: {
      std::vector<cplx> d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = i < n - spec.weight_param ? uniform(rng, 0.5, 2.0) : 0.0;
      std::shuffle(d.begin(), d.end(), rng);
      return CMatrix::diagonal(d);
    }
    case WeightKind::RandomPsd: {
      const CMatrix u = random_unitary(n, rng);
      std::vector<cplx> d(n);
      for (std::size_t i = 0; i < spec.weight_param; ++i) d[i] = uniform(rng, 0.5, 2.0);
      return hermitian_part(u * CMatrix::diagonal(d) * u.adjoint());
    }
  }
  throw Error(Errc::BadSpec, "unknown weight kind");
}

inline CMatrix gen_operator(OperatorKind kind, const AContext& ctx, std::mt19937_64& rng) {
  const std::size_t n = ctx.dim;
  const CMatrix q = complement(ctx);
  switch (kind) {
    case OperatorKind::Random: {
      // Any X with P_A X (I - P_A) removed maps ker A into ker A.
      const CMatrix x = complex_gaussian(n, n, rng);
      return x - ctx.P_A * x * q;
    }
    case OperatorKind::Diagonal: {
      const EigDecomp e = herm_eig(ctx.A, ctx.tols.tol);
      std::vector<cplx> d(n);
      for (auto& z : d) z = complex_normal(rng);
      return e.vectors * CMatrix::diagonal(d) * e.vectors.adjoint();
    }
    case OperatorKind::Nilpotent: {
      if (ctx.rank < 2) throw Error(Errc::BadSpec, "nilpotent operators need rank(A) >= 2");
      // M = c a b* with a ⟂ b in range(A), so M^2 = 0; pulled back through A^{1/2}.
      const CMatrix v = ctx.range_basis;
      const CMatrix mix = random_unitary(ctx.rank, rng);
      const CVector a = v * mix.column(0);
      const CVector b = v * mix.column(1);
      const cplx c = complex_normal(rng);
      CMatrix m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = c * a[i] * std::conj(b[j]);
      return ctx.A_half_pinv * m * ctx.A_half;
    }
    case OperatorKind::APositive: {
      // A T = P_A H P_A >= 0; the kernel block is free.
      const CMatrix g = complex_gaussian(n, n, rng);
      const CMatrix h = hermitian_part(ctx.P_A * (g * g.adjoint()) * ctx.P_A);
      const CMatrix y = complex_gaussian(n, n, rng);
      return ctx.A_pinv * h + q * y * q;
    }
  }
  throw Error(Errc::BadSpec, "unknown operator kind");
}

inline void check_spec(const InstanceSpec& spec) {
  if (spec.dim == 0) throw Error(Errc::BadSpec, "dim must be positive");
  if (spec.weight == WeightKind::DiagonalWithZeros && spec.weight_param >= spec.dim) {
    throw Error(Errc::BadSpec, "diag-zeros:k needs k < dim");
  }
  if (spec.weight == WeightKind::RandomPsd && (spec.weight_param == 0 || spec.weight_param > spec.dim)) {
    throw Error(Errc::BadSpec, "psd:r needs 1 <= r <= dim");
  }
  if (spec.epsilon && !(*spec.epsilon >= 0.0 && *spec.epsilon < 1.0)) {
    throw Error(Errc::BadSpec, "epsilon must lie in [0, 1)");
  }
}

}  // namespace detail

inline ProblemFile gen_instance(const InstanceSpec& spec) {
  detail::check_spec(spec);
  std::mt19937_64 rng(spec.seed);
  ProblemFile p;
  p.dim = spec.dim;
  p.A = detail::gen_weight(spec, rng);
  const AContext ctx = make_context(p.A);
  p.T = detail::gen_operator(spec.t_kind, ctx, rng);
  p.S = detail::gen_operator(spec.s_kind, ctx, rng);
  p.epsilon = spec.epsilon ? *spec.epsilon : detail::uniform(rng, 0.0, 0.95);
  p.label = "gen n=" + std::to_string(spec.dim) + " A=" + weight_to_string(spec.weight, spec.weight_param) +
            " T=" + std::string(to_string(spec.t_kind)) + " S=" + std::string(to_string(spec.s_kind)) +
            " seed=" + std::to_string(spec.seed);
  return p;
}

/// 64-bit mixer for deriving independent per-instance seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace shs
