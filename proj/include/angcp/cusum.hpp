#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <utility>
#include <vector>

#include "angcp/circular.hpp"
#include "angcp/geometry.hpp"
#include "angcp/kolmogorov.hpp"
#include "angcp/surface.hpp"

namespace angcp {

struct TestConfig {
  double alpha = 0.05;
  SurfaceSpec surface;
  double det_epsilon = 1e-12;
};

/// Outcome of the single-changepoint mean-direction test.
struct CusumResult {
  std::vector<double> q;  // per-observation quadratic forms
  std::vector<double> u;  // CUSUM path, u[n-1] == 0
  double statistic = 0.0;
  std::size_t khat = 0;  // 1-based index of the first maximizer of |u|
  double p_value = 1.0;
  double s_q = 0.0;  // sample SD of q, divisor n-1
};

/// Mahalanobis-style quadratic form per observation, from the signed root
/// areas of the angles as observed (the surface's zero point is the
/// reference; the dispersion matrix, not the Q-sequence, is mean-centered):
///
///   Q_i = i11*a_i + i22*b_i + 2*i12*(ab)_i
inline std::vector<double> q_sequence(const std::vector<AngularPair>& pairs,
                                      const InverseDispersion& inv,
                                      const SurfaceSpec& surface) {
  validate_surface(surface);
  if (pairs.empty()) {
    throw std::domain_error("q_sequence of an empty sample");
  }
  std::vector<double> q(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    detail::check_in_range(surface, pairs[i]);
    const auto r = detail::signed_roots(surface, pairs[i].phi, pairs[i].theta);
    q[i] = inv.i11 * r.a + inv.i22 * r.b + 2.0 * inv.i12 * r.ab;
  }
  return q;
}

/// CUSUM path of the Q-sequence:
///
///   U(k) = (sum_{i<=k} Q_i - k*Qbar) / sqrt(n * S_Q^2),  k = 1..n
///
/// Returns the path and S_Q. A constant sequence has nothing to test and
/// throws degeneracy_error.
inline std::pair<std::vector<double>, double> cusum(const std::vector<double>& q) {
  const std::size_t n = q.size();
  if (n < 2) {
    throw std::domain_error("cusum needs at least 2 values");
  }
  double mean = 0.0;
  for (double v : q) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : q) ss += (v - mean) * (v - mean);
  const double s2 = ss / static_cast<double>(n - 1);
  if (!(s2 > 1e-24)) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", s2);
    throw degeneracy_error(std::string("degenerate Q-sequence variance: S_Q^2 = ") +
                           buf);
  }
  const double scale = std::sqrt(static_cast<double>(n) * s2);
  std::vector<double> u(n);
  double partial = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    partial += q[k];
    u[k] = (partial - static_cast<double>(k + 1) * mean) / scale;
  }
  return {std::move(u), std::sqrt(s2)};
}

/// Max of |u[k]| over k = 1..n-1 (u(n) vanishes identically) and the
/// smallest 1-based maximizer.
inline std::pair<double, std::size_t> max_abs_statistic(
    const std::vector<double>& u) {
  if (u.empty()) {
    throw std::domain_error("max_abs_statistic of an empty path");
  }
  double stat = 0.0;
  std::size_t khat = 1;
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    const double a = std::abs(u[k]);
    if (a > stat) {
      stat = a;
      khat = k + 1;
    }
  }
  return {stat, khat};
}

/// Full single-changepoint test: estimate the mean directions, build the
/// dispersion matrix from the centered angles and invert it, form the
/// Q-sequence and its CUSUM, and read the p-value off the Kolmogorov law.
/// Reject when statistic > kolmogorov_quantile(alpha), equivalently
/// p_value < alpha.
inline CusumResult detect_changepoint(const std::vector<AngularPair>& pairs,
                                      const TestConfig& config) {
  validate_surface(config.surface);
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw std::domain_error("test level alpha must lie in (0, 1)");
  }
  if (pairs.size() < 4) {
    throw std::domain_error("changepoint test needs at least 4 observations");
  }
  const auto disp = curved_dispersion(pairs, config.surface);
  const auto inv = invert_dispersion(disp, config.det_epsilon);

  CusumResult result;
  result.q = q_sequence(pairs, inv, config.surface);
  auto [u, s_q] = cusum(result.q);
  result.u = std::move(u);
  result.s_q = s_q;
  std::tie(result.statistic, result.khat) = max_abs_statistic(result.u);
  result.p_value = kolmogorov_sf(result.statistic);
  return result;
}

}  // namespace angcp
