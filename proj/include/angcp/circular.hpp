#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "angcp/geometry.hpp"
#include "angcp/surface.hpp"

namespace angcp {

/// An ordered sequence of angles on a common circle of circumference
/// `period` (2*pi for full angles, pi for colatitudes).
struct AngularSeries {
  std::vector<double> values;
  double period = two_pi;
};

/// Curved dispersion matrix: the curved variances of the two coordinates on
/// the diagonal and the area covariance off it. Symmetric and positive
/// semi-definite for any sample.
struct CurvedDispersion {
  double cv_phi = 0.0;
  double cv_theta = 0.0;
  double acov = 0.0;

  double det() const { return cv_phi * cv_theta - acov * acov; }
  double trace() const { return cv_phi + cv_theta; }
};

/// Entries of the inverse dispersion matrix (i12 = i21).
struct InverseDispersion {
  double i11 = 0.0;
  double i22 = 0.0;
  double i12 = 0.0;
};

namespace detail {

inline double circular_mean_impl(std::span<const double> values, double period) {
  if (values.empty()) {
    throw std::domain_error("circular mean of an empty series");
  }
  const double scale = two_pi / period;
  double s = 0.0, c = 0.0;
  for (double v : values) {
    s += std::sin(scale * v);
    c += std::cos(scale * v);
  }
  const double n = static_cast<double>(values.size());
  if (std::hypot(s, c) / n < 1e-12) {
    throw degeneracy_error("circular mean undefined: zero resultant length");
  }
  return wrap_angle(std::atan2(s, c) / scale, period);
}

inline void check_series(const AngularSeries& series) {
  for (double v : series.values) {
    if (!(v >= 0.0 && v < series.period)) {
      throw std::domain_error("series value outside [0, period)");
    }
  }
}

}  // namespace detail

/// Mean direction of the series. Colatitude series (period pi) are averaged
/// on the doubled angle and halved, so the mean stays in [0, pi).
/// Throws degeneracy_error when the resultant length vanishes.
inline double circular_mean(const AngularSeries& series) {
  detail::check_series(series);
  return detail::circular_mean_impl(series.values, series.period);
}

/// Residual (angle - mean) reduced to [0, period).
inline double center_angle(double angle, double mean, double period) {
  return wrap_angle(angle - mean, period);
}

/// Sign of a full-circle angle: +1 below pi, -1 from pi on.
inline int sgn(double angle) {
  if (!(angle >= 0.0 && angle < two_pi)) {
    throw std::domain_error("sgn expects an angle in [0, 2*pi)");
  }
  return angle < pi ? 1 : -1;
}

/// Mean squared (in the area sense) residual of the series about its mean
/// direction; the plug-in mean is used when none is supplied. Lies in
/// [0, 1/4].
inline double curved_variance(const AngularSeries& series,
                              const SurfaceSpec& surface,
                              std::optional<double> mean = std::nullopt) {
  validate_surface(surface);
  detail::check_series(series);
  if (series.values.empty()) {
    throw std::domain_error("curved variance of an empty series");
  }
  const double mu = mean ? wrap_angle(*mean, series.period)
                         : detail::circular_mean_impl(series.values, series.period);
  double acc = 0.0;
  for (double v : series.values) {
    acc += detail::circle_square(surface, center_angle(v, mu, series.period));
  }
  return acc / static_cast<double>(series.values.size());
}

namespace detail {

// Signed square roots of the two coordinate squares for one centered pair.
// The vertical sign is dropped on the sphere (colatitude has no wrap past
// pi to flip).
struct SignedRoots {
  double a = 0.0;   // square of the phi residual
  double b = 0.0;   // square of the theta residual
  double ab = 0.0;  // sgn(phi_c)*sgn(theta_c)*sqrt(a*b)
};

inline SignedRoots signed_roots(const SurfaceSpec& surface, double phi_c,
                                double theta_c) {
  SignedRoots r;
  r.a = circle_square(surface, phi_c);
  r.b = circle_square(surface, theta_c);
  int sign = sgn(phi_c);
  if (surface.kind == Surface::torus) sign *= sgn(theta_c);
  r.ab = sign * std::sqrt(r.a * r.b);
  return r;
}

struct CenteredPairs {
  std::vector<double> phi;
  std::vector<double> theta;
  double mu_phi = 0.0;
  double mu_theta = 0.0;
};

inline CenteredPairs center_pairs(const std::vector<AngularPair>& pairs,
                                  const SurfaceSpec& surface,
                                  std::optional<std::pair<double, double>> means) {
  const double tp = theta_period(surface);
  std::vector<double> phis(pairs.size()), thetas(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    check_in_range(surface, pairs[i]);
    phis[i] = pairs[i].phi;
    thetas[i] = pairs[i].theta;
  }
  CenteredPairs out;
  out.mu_phi = means ? wrap_angle(means->first, two_pi)
                     : circular_mean_impl(phis, two_pi);
  out.mu_theta = means ? wrap_angle(means->second, tp)
                       : circular_mean_impl(thetas, tp);
  out.phi.resize(pairs.size());
  out.theta.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.phi[i] = center_angle(phis[i], out.mu_phi, two_pi);
    out.theta[i] = center_angle(thetas[i], out.mu_theta, tp);
  }
  return out;
}

}  // namespace detail

/// Area covariance of the paired coordinates: the mean signed geometric mean
/// of the two residual squares. Bounded by Cauchy-Schwarz:
/// |acov| <= sqrt(cv_phi * cv_theta).
inline double area_covariance(const std::vector<AngularPair>& pairs,
                              const SurfaceSpec& surface,
                              std::optional<std::pair<double, double>> means =
                                  std::nullopt) {
  validate_surface(surface);
  if (pairs.empty()) {
    throw std::domain_error("area covariance of an empty sample");
  }
  const auto centered = detail::center_pairs(pairs, surface, means);
  double acc = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    acc += detail::signed_roots(surface, centered.phi[i], centered.theta[i]).ab;
  }
  return acc / static_cast<double>(pairs.size());
}

/// Estimated curved dispersion matrix of the sample, built from the three
/// plug-in estimators on mean-centered angles.
inline CurvedDispersion curved_dispersion(
    const std::vector<AngularPair>& pairs, const SurfaceSpec& surface,
    std::optional<std::pair<double, double>> means = std::nullopt) {
  validate_surface(surface);
  if (pairs.size() < 2) {
    throw std::domain_error("curved dispersion needs at least 2 observations");
  }
  const auto centered = detail::center_pairs(pairs, surface, means);
  CurvedDispersion m;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto r = detail::signed_roots(surface, centered.phi[i], centered.theta[i]);
    m.cv_phi += r.a;
    m.cv_theta += r.b;
    m.acov += r.ab;
  }
  const double n = static_cast<double>(pairs.size());
  m.cv_phi /= n;
  m.cv_theta /= n;
  m.acov /= n;
  return m;
}

/// Exact 2x2 inverse. Throws degeneracy_error when the determinant is at or
/// below eps_det.
inline InverseDispersion invert_dispersion(const CurvedDispersion& m,
                                           double eps_det = 1e-12) {
  const double det = m.det();
  if (!(det > eps_det)) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", det);
    throw degeneracy_error(std::string("curved dispersion matrix is singular: det = ") + buf);
  }
  return {m.cv_theta / det, m.cv_phi / det, -m.acov / det};
}

}  // namespace angcp
