#pragma once

#include <cmath>
#include <stdexcept>

namespace cra {

struct BisectionOptions {
  double rel_tol = 1e-12;
  int max_iter = 200;
};

/// Root of a continuous `f` with a sign change on [lo, hi].
///
/// Stops once the bracket is narrower than rel_tol * |midpoint| or `f` hits
/// zero exactly.
template <class F>
double bisect(F&& f, double lo, double hi, BisectionOptions opts = {}) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) throw std::domain_error("bisect: no sign change on bracket");
  for (int i = 0; i < opts.max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= opts.rel_tol * std::fabs(mid)) return mid;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Root of a strictly decreasing `f` on (0, inf), starting near `start`.
/// The lower end halves until f >= 0, the upper end doubles until f < 0.
template <class F>
double bisect_decreasing_from(F&& f, double start, BisectionOptions opts = {}) {
  if (!(start > 0.0)) throw std::domain_error("bisect_decreasing_from: start must be > 0");
  for (int i = 0; f(start) < 0.0; ++i) {
    if (i >= 1024) throw std::domain_error("bisect_decreasing_from: bracket expansion failed");
    start *= 0.5;
  }
  double hi = 2.0 * start;
  for (int i = 0; f(hi) > 0.0; ++i) {
    if (i >= 1024) throw std::domain_error("bisect_decreasing_from: bracket expansion failed");
    hi *= 2.0;
  }
  return bisect(f, start, hi, opts);
}

}  // namespace cra
