#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "dce/errors.hpp"

namespace dce::roots {

struct Result {
  double x;
  int iterations;
};

struct Options {
  double abs_tol = 1e-12;
  int max_iterations = 200;
};

/// Root of f on [lo, hi] where f(lo) and f(hi) have opposite signs (or one is
/// zero). Secant steps through the two most recent iterates are accepted
/// when they land inside the current bracket and shrink it at least as fast
/// as bisection would over two steps; otherwise the bracket is bisected.
/// The bracket is never lost, so convergence is guaranteed.
template <typename Fn>
Result bisect_secant(Fn&& f, double lo, double hi, double f_lo, double f_hi,
                     const Options& opt = {}) {
  if (f_lo == 0.0) return {lo, 0};
  if (f_hi == 0.0) return {hi, 0};
  if ((f_lo < 0) == (f_hi < 0)) {
    throw ConvergenceError("bisect_secant: root not bracketed");
  }
  double a = lo, fa = f_lo;
  double b = hi, fb = f_hi;
  // Most recent two iterates for the secant step.
  double x0 = a, f0 = fa, x1 = b, f1 = fb;
  double width_before = std::abs(b - a);
  for (int it = 1; it <= opt.max_iterations; ++it) {
    double x;
    const double denom = f1 - f0;
    bool use_secant = denom != 0.0;
    if (use_secant) {
      x = x1 - f1 * (x1 - x0) / denom;
      const double lo_b = std::min(a, b), hi_b = std::max(a, b);
      use_secant = x > lo_b && x < hi_b;
    }
    if (!use_secant) x = 0.5 * (a + b);
    const double fx = f(x);
    if (fx == 0.0) return {x, it};
    if ((fx < 0) == (fa < 0)) {
      a = x; fa = fx;
    } else {
      b = x; fb = fx;
    }
    x0 = x1; f0 = f1;
    x1 = x; f1 = fx;
    const double width = std::abs(b - a);
    if (width <= opt.abs_tol || std::abs(x1 - x0) <= 0.5 * opt.abs_tol) {
      // Return the bracket end with the smaller residual.
      return {std::abs(fa) < std::abs(fb) ? a : b, it};
    }
    // Every other iteration, force a bisection if the bracket has not at
    // least halved; this bounds the worst case by twice plain bisection.
    if (it % 2 == 0) {
      if (width > 0.5 * width_before) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return {m, it};
        if ((fm < 0) == (fa < 0)) {
          a = m; fa = fm;
        } else {
          b = m; fb = fm;
        }
        x0 = a; f0 = fa; x1 = b; f1 = fb;
      }
      width_before = std::abs(b - a);
    }
  }
  throw ConvergenceError("bisect_secant: iteration limit reached");
}

template <typename Fn>
Result bisect_secant(Fn&& f, double lo, double hi, const Options& opt = {}) {
  return bisect_secant(f, lo, hi, f(lo), f(hi), opt);
}

/// Grows [lo, hi] geometrically about its centre until f changes sign or
/// `max_width` is exceeded. Returns the straddling bracket with its end
/// values, or nothing.
template <typename Fn>
std::optional<std::pair<double, double>> expand_bracket(Fn&& f, double& lo, double& hi,
                                                        double max_width,
                                                        double growth = 1.6) {
  double f_lo = f(lo), f_hi = f(hi);
  while ((f_lo < 0) == (f_hi < 0) && f_lo != 0.0 && f_hi != 0.0) {
    const double width = hi - lo;
    if (width > max_width) return std::nullopt;
    const double grow = 0.5 * (growth - 1.0) * width;
    lo -= grow;
    hi += grow;
    f_lo = f(lo);
    f_hi = f(hi);
  }
  return std::make_pair(f_lo, f_hi);
}

}  // namespace dce::roots
