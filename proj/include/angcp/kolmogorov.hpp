#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace angcp {

/// Survival function of the Kolmogorov distribution (the law of the supremum
/// of the absolute Brownian bridge):
///
///   P(K > x) = 2 * sum_{k>=1} (-1)^(k-1) * exp(-2 k^2 x^2)
///
/// The alternating series is truncated once a term drops below 1e-16.
inline double kolmogorov_sf(double x) {
  if (!(x >= 0.0)) {
    throw std::domain_error("kolmogorov_sf expects x >= 0");
  }
  if (x == 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k < 100000; ++k) {
    const double term = 2.0 * std::exp(-2.0 * k * k * x * x);
    if (term < 1e-16) break;
    sum += sign * term;
    sign = -sign;
  }
  return std::clamp(sum, 0.0, 1.0);
}

inline double kolmogorov_cdf(double x) { return 1.0 - kolmogorov_sf(x); }

/// Upper-alpha point of the Kolmogorov distribution, by bisection of the
/// survival function on [0.1, 5] (extended upward if ever needed).
inline double kolmogorov_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("kolmogorov_quantile expects alpha in (0, 1)");
  }
  double lo = 0.1, hi = 5.0;
  while (kolmogorov_sf(hi) > alpha && hi < 1e3) hi *= 2.0;
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_sf(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace angcp
