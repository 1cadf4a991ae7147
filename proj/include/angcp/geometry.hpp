#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "angcp/surface.hpp"

namespace angcp {

/// The four areas into which two diagonally opposite points split the
/// surface, each divided by the total surface area.
struct RegionAreas {
  double a1 = 0.0;  // [phi1,phi2] x [theta1,theta2]
  double a2 = 0.0;  // complement of the phi band, same theta band
  double a3 = 0.0;  // phi band, complement theta band
  double a4 = 0.0;  // complement of both bands

  double min() const { return std::min(std::min(a1, a2), std::min(a3, a4)); }
  double sum() const { return a1 + a2 + a3 + a4; }
};

namespace detail {

inline void check_in_range(const SurfaceSpec& surface, const AngularPair& p) {
  const double tp = theta_period(surface);
  if (!(p.phi >= 0.0 && p.phi < two_pi) || !(p.theta >= 0.0 && p.theta < tp)) {
    throw std::domain_error("angular pair out of range for surface");
  }
}

// Fraction of the total area carried by the vertical band [t1, t2], t1 <= t2.
// Torus: integral of (1 + rho*cos t) dt / (2*pi); sphere: integral of
// sin t dt / 2. Both complements are 1 minus this, so the four region areas
// sum to one exactly.
inline double vertical_fraction(const SurfaceSpec& surface, double t1, double t2) {
  if (surface.kind == Surface::torus) {
    return ((t2 - t1) + surface.ratio * (std::sin(t2) - std::sin(t1))) / two_pi;
  }
  return (std::cos(t1) - std::cos(t2)) / 2.0;
}

// Square of a centered circular residual t in [0, 2*pi). On the torus this
// is exactly square_of_angle. On the sphere the closed forms are symmetric
// about pi, so a horizontal residual folds onto [0, pi]; the colatitude
// residual already lives there.
inline double circle_square(const SurfaceSpec& surface, double t) {
  double h, v;
  if (surface.kind == Surface::sphere) {
    const double psi = std::min(t, two_pi - t);
    h = psi / two_pi;
    v = (1.0 - std::cos(psi)) / 2.0;
  } else {
    h = t / two_pi;
    v = (t + surface.ratio * std::sin(t)) / two_pi;
  }
  return std::min(h, 1.0 - h) * std::min(v, 1.0 - v);
}

}  // namespace detail

/// Normalized areas of the four regions spanned by p1 and p2. The pair is
/// unordered: coordinates are reordered internally so the first region is
/// [phi1,phi2] x [theta1,theta2] with phi1 <= phi2, theta1 <= theta2.
inline RegionAreas region_areas(const SurfaceSpec& surface, AngularPair p1,
                                AngularPair p2) {
  validate_surface(surface);
  detail::check_in_range(surface, p1);
  detail::check_in_range(surface, p2);
  if (p1.phi > p2.phi) std::swap(p1.phi, p2.phi);
  if (p1.theta > p2.theta) std::swap(p1.theta, p2.theta);

  const double h = (p2.phi - p1.phi) / two_pi;
  const double v = detail::vertical_fraction(surface, p1.theta, p2.theta);
  return {h * v, (1.0 - h) * v, h * (1.0 - v), (1.0 - h) * (1.0 - v)};
}

/// Proportionate area between two diagonally opposite points: the smallest
/// of the four region areas. Lies in [0, 1/4].
inline double proportionate_area(const SurfaceSpec& surface,
                                 const AngularPair& p1, const AngularPair& p2) {
  return region_areas(surface, p1, p2).min();
}

/// Square of an angle: the proportionate area between (0,0) and
/// (angle, angle). Vanishes at 0; on the torus it peaks at 1/4 when
/// angle = pi.
inline double square_of_angle(const SurfaceSpec& surface, double angle) {
  validate_surface(surface);
  const double tp = theta_period(surface);
  if (!(angle >= 0.0 && angle < tp)) {
    throw std::domain_error("angle out of range for square_of_angle");
  }
  return proportionate_area(surface, {0.0, 0.0}, {angle, angle});
}

// ---------------------------------------------------------------------------
// Quadrature oracle: surface area from the first fundamental form of the
// embedding, independent of the closed forms above.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

namespace detail {

struct Vec3 {
  double x, y, z;
};

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

// sqrt(EG - F^2) at (phi, theta) from the tangent vectors of the embedding.
// Torus radii are taken as R = 1, r = ratio; areas are normalized later so
// only the ratio matters. Sphere radius 1.
inline double area_element(const SurfaceSpec& surface, double phi, double theta) {
  Vec3 xp, xt;
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double ct = std::cos(theta), st = std::sin(theta);
  if (surface.kind == Surface::torus) {
    const double r = surface.ratio;
    const double ring = 1.0 + r * ct;
    xp = {-ring * sp, ring * cp, 0.0};
    xt = {-r * st * cp, -r * st * sp, r * ct};
  } else {
    xp = {-st * sp, st * cp, 0.0};
    xt = {ct * cp, ct * sp, -st};
  }
  const double e = dot(xp, xp);
  const double f = dot(xp, xt);
  const double g = dot(xt, xt);
  return std::sqrt(std::max(0.0, e * g - f * f));
}

// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
// Legendre recurrence.
inline const std::pair<std::vector<double>, std::vector<double>>&
gauss_legendre_64() {
  static const auto table = [] {
    constexpr int n = 64;
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return std::make_pair(x, w);
  }();
  return table;
}

inline double integrate_patch(const SurfaceSpec& surface, const Interval& phi,
                              const Interval& theta) {
  const auto& [nodes, weights] = gauss_legendre_64();
  const double hp = 0.5 * (phi.hi - phi.lo), cp = 0.5 * (phi.hi + phi.lo);
  const double ht = 0.5 * (theta.hi - theta.lo), ct = 0.5 * (theta.hi + theta.lo);
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double p = cp + hp * nodes[i];
    double inner = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      inner += weights[j] * area_element(surface, p, ct + ht * nodes[j]);
    }
    acc += weights[i] * inner;
  }
  return acc * hp * ht;
}

}  // namespace detail

/// Area of the parameter rectangle phi_range x theta_range divided by the
/// total surface area, both computed by 64-node Gauss-Legendre quadrature of
/// sqrt(EG - F^2). Serves as the independent check of the closed forms.
/// Empty or inverted ranges integrate to zero.
inline double numeric_surface_area(const SurfaceSpec& surface, Interval phi_range,
                                   Interval theta_range) {
  validate_surface(surface);
  const double tp = theta_period(surface);
  if (phi_range.lo < 0.0 || phi_range.hi > two_pi || theta_range.lo < 0.0 ||
      theta_range.hi > tp) {
    throw std::domain_error("quadrature range outside parameter space");
  }
  if (phi_range.lo >= phi_range.hi || theta_range.lo >= theta_range.hi) {
    return 0.0;
  }
  const double total = detail::integrate_patch(surface, {0.0, two_pi}, {0.0, tp});
  return detail::integrate_patch(surface, phi_range, theta_range) / total;
}

}  // namespace angcp
