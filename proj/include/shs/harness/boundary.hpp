#pragma once

// Boundary polyline of W_A(T, S) for plotting, as CSV.

#include <cstdio>
#include <string>

#include "shs/detail/angles.hpp"
#include "shs/densela.hpp"
#include "shs/gauges.hpp"
#include "shs/harness/problem.hpp"
#include "shs/ortho.hpp"

namespace shs {

/// Support points z(theta) = u* C u, u the top eigenvector of Re(e^{-i theta} C),
/// at `samples` equally spaced angles. The first line records the ball radius.
inline std::string wset_boundary_csv(const CMatrix& c, double radius, std::size_t samples) {
  std::string out;
  char buf[96];
  std::snprintf(buf, sizeof buf, "# radius=%.17g\n", radius);
  out += buf;
  out += "theta,re,im\n";
  for (std::size_t i = 0; i < samples; ++i) {
    const double theta = detail::kTwoPi * static_cast<double>(i) / static_cast<double>(samples);
    const CVector u = herm_eig(rotated_hermitian_part(c, theta)).vectors.column(0);
    const cplx z = vdot(u, c * u);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", theta, z.real(), z.imag());
    out += buf;
  }
  return out;
}

inline std::string export_wset_boundary(const ProblemFile& p, std::size_t samples) {
  const AContext ctx = make_context(p.A, effective_tolerances(p));
  const double nt = op_seminorm(ctx, p.T);
  if (nt <= detail::zero_seminorm_tol(ctx, p.T)) throw Error(Errc::ZeroSeminorm, "||T||_A = 0");
  const WSet w = wset(ctx, p.T, p.S);
  return wset_boundary_csv(w.C, p.epsilon * nt * op_seminorm(ctx, p.S), samples);
}

}  // namespace shs
