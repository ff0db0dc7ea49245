#pragma once

// Scalar root finding: bracketed bisection safeguarding a Newton iteration.

#include <cmath>
#include <string>

#include "valveflow/error.hpp"

namespace valveflow {

struct RootTolerance {
  double f_rel = 1e-12;   ///< |f| <= f_rel * f_scale
  double x_rel = 1e-13;   ///< step or bracket width <= x_rel * max(1, |x|)
  int max_iter = 300;
};

/// Root of f on [lo, hi], where f(lo) and f(hi) have opposite signs (or one is 0).
/// `df` is the derivative of f. Newton steps leaving the bracket fall back to bisection.
template <class F, class DF>
double solve_bracketed(F&& f, DF&& df, double lo, double hi, double f_scale,
                       const char* what, RootTolerance tol = {}) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NoConvergence(std::string(what) + ": root is not bracketed");
  }
  const bool increasing = flo < 0.0;
  const double f_eps = tol.f_rel * std::max(1.0, std::abs(f_scale));

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < tol.max_iter; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == increasing) {
      lo = x;
    } else {
      hi = x;
    }
    const double d = df(x);
    double next = 0.5 * (lo + hi);
    if (d != 0.0 && std::isfinite(d)) {
      const double newton = x - fx / d;
      if (newton > lo && newton < hi) next = newton;
    }
    const double step = std::abs(next - x);
    const double x_eps = tol.x_rel * std::max(1.0, std::abs(x));
    if (std::abs(fx) <= f_eps && step <= x_eps) return next;
    if (hi - lo <= x_eps || next == x) return next;
    x = next;
  }
  throw NoConvergence(std::string(what) + ": iteration limit reached");
}

}  // namespace valveflow
