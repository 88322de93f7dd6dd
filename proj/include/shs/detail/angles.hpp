#pragma once

// One-dimensional searches over the circle [0, 2pi): uniform scan followed by
// Brent refinement (golden section with parabolic steps) of the best cells.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace shs::detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct AnglePeak {
  double theta = 0.0;
  double value = 0.0;
};

struct CircleScan {
  std::vector<double> thetas;
  std::vector<double> values;
  std::vector<AnglePeak> peaks;  // refined local maxima, best first
  AnglePeak best;
};

/// Maximizes f on [lo, hi] starting from an interior point `mid`.
template <class F>
AnglePeak brent_max(F&& f, double lo, double hi, double mid, double fmid, double xtol) {
  constexpr double kGold = 0.3819660112501051;
  double a = lo, b = hi;
  double x = mid, w = mid, v = mid;
  double fx = -fmid, fw = fx, fv = fx;  // minimize -f
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double xm = 0.5 * (a + b);
    const double tol1 = xtol + 1e-20;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (!(std::abs(p) >= std::abs(0.5 * q * etemp) || p <= q * (a - x) || p >= q * (b - x))) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = xm - x >= 0.0 ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = x >= xm ? a - x : b - x;
      d = kGold * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d >= 0.0 ? tol1 : -tol1);
    const double fu = -f(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, -fx};
}

/// Scans f on `samples` uniform angles and refines up to `refine` local maxima.
template <class F>
CircleScan maximize_on_circle(F&& f, std::size_t samples, std::size_t refine = 3,
                              double xtol = 1e-10) {
  CircleScan scan;
  const double h = kTwoPi / static_cast<double>(samples);
  scan.thetas.resize(samples);
  scan.values.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    scan.thetas[i] = h * static_cast<double>(i);
    scan.values[i] = f(scan.thetas[i]);
  }

  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < samples; ++i) {
    const double prev = scan.values[(i + samples - 1) % samples];
    const double next = scan.values[(i + 1) % samples];
    if (scan.values[i] >= prev && scan.values[i] >= next) cells.push_back(i);
  }
  std::stable_sort(cells.begin(), cells.end(),
                   [&](std::size_t x, std::size_t y) { return scan.values[x] > scan.values[y]; });
  if (cells.size() > refine) cells.resize(refine);

  const auto best_sample = std::max_element(scan.values.begin(), scan.values.end());
  scan.best = {scan.thetas[best_sample - scan.values.begin()], *best_sample};
  for (std::size_t i : cells) {
    const double t0 = scan.thetas[i];
    AnglePeak p = brent_max(f, t0 - h, t0 + h, t0, scan.values[i], xtol);
    if (p.value < scan.values[i]) p = {t0, scan.values[i]};
    p.theta = std::fmod(p.theta + kTwoPi, kTwoPi);
    scan.peaks.push_back(p);
    if (p.value > scan.best.value) scan.best = p;
  }
  std::stable_sort(scan.peaks.begin(), scan.peaks.end(),
                   [](const AnglePeak& x, const AnglePeak& y) { return x.value > y.value; });
  return scan;
}

/// Minimization counterpart of maximize_on_circle (values reported unnegated).
template <class F>
CircleScan minimize_on_circle(F&& f, std::size_t samples, std::size_t refine = 3,
                              double xtol = 1e-10) {
  CircleScan scan = maximize_on_circle([&](double t) { return -f(t); }, samples, refine, xtol);
  for (auto& v : scan.values) v = -v;
  for (auto& p : scan.peaks) p.value = -p.value;
  scan.best.value = -scan.best.value;
  return scan;
}

}  // namespace shs::detail
