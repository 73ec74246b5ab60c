#pragma once

// Test-only reference routines. They work from first principles (scalar
// search, explicit formulas) and share no code paths with the library's
// solvers.

#include <cmath>
#include <functional>

namespace proxframe::testing {

/// argmin of a unimodal function on [lo, hi] by golden-section search.
inline double golden_section_argmin(const std::function<double(double)>& fn, double lo, double hi,
                                    double tol = 1e-13) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

/// argmin over the grid lo, lo + step, ..., hi.
inline double grid_argmin(const std::function<double(double)>& fn, double lo, double hi,
                          double step) {
  double best_x = lo;
  double best = fn(lo);
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  for (long k = 1; k <= count; ++k) {
    const double x = lo + static_cast<double>(k) * step;
    const double v = fn(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  return best_x;
}

/// Grid search refined by golden section around the best grid point.
inline double refined_argmin(const std::function<double(double)>& fn, double lo, double hi,
                             double step) {
  const double x0 = grid_argmin(fn, lo, hi, step);
  return golden_section_argmin(fn, x0 - step, x0 + step);
}

/// f for T = (1, 2)ᵀ, g = ‖·‖₁, by direct minimization over the null-space
/// coordinate: min_t |y + 2t| + |2y − t| + (5/2)t².
inline double example_regularizer_by_search(double y) {
  const auto g = [y](double t) {
    return std::abs(y + 2.0 * t) + std::abs(2.0 * y - t) + 2.5 * t * t;
  };
  const double t = refined_argmin(g, -2.0, 2.0, 1e-3);
  return g(t);
}

}  // namespace proxframe::testing
