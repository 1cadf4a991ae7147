#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace angcp {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class Surface { torus, sphere };

/// Surface a bivariate angular observation lives on.
///
/// The torus is parametrized by a horizontal angle phi in [0, 2*pi) and a
/// vertical angle theta in [0, 2*pi); all normalized area quantities depend
/// on the two radii only through ratio = r/R, which must lie in (0, 1]
/// (ring torus). The sphere uses phi in [0, 2*pi) and colatitude theta in
/// [0, pi); normalized areas are radius-free.
struct SurfaceSpec {
  Surface kind = Surface::torus;
  double ratio = 0.5;  // r/R, torus only

  static SurfaceSpec torus(double r_over_R) { return {Surface::torus, r_over_R}; }
  static SurfaceSpec sphere() { return {Surface::sphere, 1.0}; }
};

/// One observation (phi, theta). Ranges follow the SurfaceSpec convention.
struct AngularPair {
  double phi = 0.0;
  double theta = 0.0;
};

/// Data-level failures (unreadable file, bad row, missing column).
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical degeneracies: singular dispersion matrix, zero Q-variance,
/// zero-resultant circular mean.
class degeneracy_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reduce an angle to [0, period).
inline double wrap_angle(double angle, double period) {
  double w = std::fmod(angle, period);
  if (w < 0.0) w += period;
  if (w >= period) w = 0.0;  // fmod rounding at the seam
  return w;
}

/// Period of the vertical angle: 2*pi on the torus, pi on the sphere.
inline double theta_period(const SurfaceSpec& surface) {
  return surface.kind == Surface::sphere ? pi : two_pi;
}

inline void validate_surface(const SurfaceSpec& surface) {
  if (surface.kind == Surface::torus &&
      !(surface.ratio > 0.0 && surface.ratio <= 1.0)) {
    throw std::domain_error("torus radius ratio r/R must lie in (0, 1], got " +
                            std::to_string(surface.ratio));
  }
}

/// Build an observation from raw angles, reducing both to their ranges.
inline AngularPair make_angular_pair(const SurfaceSpec& surface, double phi,
                                     double theta) {
  if (!std::isfinite(phi) || !std::isfinite(theta)) {
    throw std::domain_error("angles must be finite");
  }
  return {wrap_angle(phi, two_pi), wrap_angle(theta, theta_period(surface))};
}

}  // namespace angcp
