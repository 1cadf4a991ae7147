#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "angcp/circular.hpp"
#include "angcp/surface.hpp"

namespace angcp {

/// Bivariate von Mises sine model on the torus:
///   f ~ exp{k1*cos(phi-mu_phi) + k2*cos(theta-mu_theta)
///           + k3*sin(phi-mu_phi)*sin(theta-mu_theta)}
struct SineModelParams {
  double mu_phi = 0.0;
  double mu_theta = 0.0;
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double kappa3 = 0.0;
};

/// Cosine variant: the interaction term is k3*cos(phi-mu_phi-theta+mu_theta).
struct CosineModelParams {
  double mu_phi = 0.0;
  double mu_theta = 0.0;
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double kappa3 = 0.0;
};

/// Fisher distribution on the sphere with mean direction at colatitude
/// `alpha`, longitude `beta` and concentration `kappa`.
struct FisherParams {
  double alpha = 0.0;
  double beta = 0.0;
  double kappa = 0.0;
};

/// Pairs plus the acceptance rate of the rejection step that produced them
/// (1 for samplers with no rejection).
struct PairSample {
  std::vector<AngularPair> pairs;
  double acceptance_rate = 1.0;
};

/// Deterministic engine for (seed, stream). Streams decouple replications:
/// results do not depend on execution order or thread count.
inline std::mt19937_64 substream_engine(std::uint64_t seed,
                                        std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

namespace detail {

// uniform on [0, 1), 53-bit
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// uniform on (0, 1]
inline double uniform01_open(std::mt19937_64& gen) {
  return 1.0 - uniform01(gen);
}

// One von Mises draw by the Best-Fisher (1979) wrapped-Cauchy rejection
// scheme; kappa ~ 0 falls back to the circular uniform.
inline double von_mises_draw(std::mt19937_64& gen, double mu, double kappa) {
  if (kappa < 1e-10) {
    return two_pi * uniform01(gen);
  }
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double rr = (1.0 + rho * rho) / (2.0 * rho);
  for (;;) {
    const double z = std::cos(pi * uniform01(gen));
    const double f = (1.0 + rr * z) / (rr + z);
    const double c = kappa * (rr - f);
    const double u2 = uniform01_open(gen);
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double side = uniform01(gen) < 0.5 ? -1.0 : 1.0;
      return wrap_angle(mu + side * std::acos(f), two_pi);
    }
  }
}

}  // namespace detail

/// n i.i.d. von Mises(mu, kappa) angles; deterministic given (seed, stream).
inline AngularSeries sample_von_mises(double mu, double kappa, std::size_t n,
                                      std::uint64_t seed,
                                      std::uint64_t stream = 0) {
  if (!(kappa >= 0.0)) {
    throw std::domain_error("von Mises concentration must be >= 0");
  }
  auto gen = substream_engine(seed, stream);
  AngularSeries out{std::vector<double>(n), two_pi};
  for (auto& v : out.values) v = detail::von_mises_draw(gen, mu, kappa);
  return out;
}

/// Exact i.i.d. draws from the sine model: independent von Mises proposals
/// for the two coordinates, accepted with probability
/// exp(k3*sin(phi')*sin(theta') - |k3|) <= 1.
inline PairSample sample_vm_sine(const SineModelParams& p, std::size_t n,
                                 std::uint64_t seed, std::uint64_t stream = 0) {
  if (!(p.kappa1 > 0.0 && p.kappa2 > 0.0)) {
    throw std::domain_error("sine model needs kappa1, kappa2 > 0");
  }
  auto gen = substream_engine(seed, stream);
  PairSample out;
  out.pairs.reserve(n);
  std::size_t proposals = 0;
  while (out.pairs.size() < n) {
    const double phi = detail::von_mises_draw(gen, p.mu_phi, p.kappa1);
    const double theta = detail::von_mises_draw(gen, p.mu_theta, p.kappa2);
    ++proposals;
    const double log_accept = p.kappa3 * std::sin(phi - p.mu_phi) *
                                  std::sin(theta - p.mu_theta) -
                              std::abs(p.kappa3);
    if (std::log(detail::uniform01_open(gen)) < log_accept) {
      out.pairs.push_back({phi, theta});
    }
  }
  out.acceptance_rate = static_cast<double>(n) / static_cast<double>(proposals);
  return out;
}

/// Cosine-model analogue; acceptance weight exp(k3*cos(phi'-theta') - |k3|).
inline PairSample sample_vm_cosine(const CosineModelParams& p, std::size_t n,
                                   std::uint64_t seed,
                                   std::uint64_t stream = 0) {
  if (!(p.kappa1 > 0.0 && p.kappa2 > 0.0)) {
    throw std::domain_error("cosine model needs kappa1, kappa2 > 0");
  }
  auto gen = substream_engine(seed, stream);
  PairSample out;
  out.pairs.reserve(n);
  std::size_t proposals = 0;
  while (out.pairs.size() < n) {
    const double phi = detail::von_mises_draw(gen, p.mu_phi, p.kappa1);
    const double theta = detail::von_mises_draw(gen, p.mu_theta, p.kappa2);
    ++proposals;
    const double log_accept =
        p.kappa3 * std::cos(phi - p.mu_phi - theta + p.mu_theta) -
        std::abs(p.kappa3);
    if (std::log(detail::uniform01_open(gen)) < log_accept) {
      out.pairs.push_back({phi, theta});
    }
  }
  out.acceptance_rate = static_cast<double>(n) / static_cast<double>(proposals);
  return out;
}

/// n i.i.d. draws from the Fisher distribution. The cosine of the angle from
/// the mean direction has the exponentially tilted law on [-1, 1], sampled
/// by its closed-form inverse CDF; the longitude about the mean axis is
/// uniform. Coordinates follow x = (cos(theta), sin(theta)cos(phi),
/// sin(theta)sin(phi)).
inline PairSample sample_fisher(const FisherParams& p, std::size_t n,
                                std::uint64_t seed, std::uint64_t stream = 0) {
  if (!(p.kappa >= 0.0)) {
    throw std::domain_error("Fisher concentration must be >= 0");
  }
  auto gen = substream_engine(seed, stream);

  const double m1 = std::cos(p.alpha);
  const double m2 = std::sin(p.alpha) * std::cos(p.beta);
  const double m3 = std::sin(p.alpha) * std::sin(p.beta);
  // orthonormal frame about the mean axis
  double e1x, e1y, e1z;
  if (std::abs(m1) < 0.9) {
    e1x = 0.0;
    e1y = -m3;
    e1z = m2;
  } else {
    e1x = -m2;
    e1y = m1;
    e1z = 0.0;
  }
  const double norm = std::sqrt(e1x * e1x + e1y * e1y + e1z * e1z);
  e1x /= norm;
  e1y /= norm;
  e1z /= norm;
  const double e2x = m2 * e1z - m3 * e1y;
  const double e2y = m3 * e1x - m1 * e1z;
  const double e2z = m1 * e1y - m2 * e1x;

  PairSample out;
  out.pairs.reserve(n);
  const SurfaceSpec sphere = SurfaceSpec::sphere();
  for (std::size_t i = 0; i < n; ++i) {
    const double u = detail::uniform01_open(gen);
    const double w = p.kappa < 1e-12
                         ? 2.0 * u - 1.0
                         : 1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * p.kappa)) /
                                     p.kappa;
    const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
    const double v = two_pi * detail::uniform01(gen);
    const double x1 = w * m1 + s * (std::cos(v) * e1x + std::sin(v) * e2x);
    const double x2 = w * m2 + s * (std::cos(v) * e1y + std::sin(v) * e2y);
    const double x3 = w * m3 + s * (std::cos(v) * e1z + std::sin(v) * e2z);
    const double theta = std::atan2(std::hypot(x2, x3), x1);
    const double phi = std::atan2(x3, x2);
    out.pairs.push_back(make_angular_pair(sphere, phi, theta));
  }
  return out;
}

}  // namespace angcp
