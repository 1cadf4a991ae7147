#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "angcp/circular.hpp"
#include "angcp/samplers.hpp"

using namespace angcp;

namespace {

double mean_resultant(const std::vector<double>& values) {
  double s = 0.0, c = 0.0;
  for (double v : values) {
    s += std::sin(v);
    c += std::cos(v);
  }
  return std::hypot(s, c) / values.size();
}

// correlation of sin(phi - mu_phi) with sin(theta - mu_theta)
double sine_correlation(const std::vector<AngularPair>& pairs, double mu_phi,
                        double mu_theta) {
  std::vector<double> x(pairs.size()), y(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    x[i] = std::sin(pairs[i].phi - mu_phi);
    y[i] = std::sin(pairs[i].theta - mu_theta);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// unnormalized phi-marginal of the sine model at mu = (0, 0), by quadrature
// over theta
double sine_marginal(double phi, double k1, double k2, double k3) {
  const int m = 2000;
  double acc = 0.0;
  for (int j = 0; j < m; ++j) {
    const double th = two_pi * (j + 0.5) / m;
    acc += std::exp(k2 * std::cos(th) + k3 * std::sin(phi) * std::sin(th));
  }
  return std::exp(k1 * std::cos(phi)) * acc;
}

}  // namespace

TEST_CASE("samplers are deterministic under a fixed seed") {
  const auto a = sample_von_mises(1.0, 3.0, 64, 123);
  const auto b = sample_von_mises(1.0, 3.0, 64, 123);
  CHECK(a.values == b.values);
  CHECK(sample_von_mises(1.0, 3.0, 64, 124).values != a.values);
  CHECK(sample_von_mises(1.0, 3.0, 64, 123, 1).values != a.values);

  const auto s1 = sample_vm_sine({1, 2, 2, 2, 2}, 32, 5).pairs;
  const auto s2 = sample_vm_sine({1, 2, 2, 2, 2}, 32, 5).pairs;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].phi == s2[i].phi);
    CHECK(s1[i].theta == s2[i].theta);
  }
  const auto c1 = sample_vm_cosine({1, 2, 2, 2, 2}, 16, 5).pairs;
  const auto c2 = sample_vm_cosine({1, 2, 2, 2, 2}, 16, 5).pairs;
  CHECK(c1[15].phi == c2[15].phi);
  const auto f1 = sample_fisher({0.5, 1.0, 3.0}, 16, 5).pairs;
  const auto f2 = sample_fisher({0.5, 1.0, 3.0}, 16, 5).pairs;
  CHECK(f1[15].theta == f2[15].theta);
}

TEST_CASE("von Mises sampler") {
  SECTION("kappa 0 is circular uniform") {
    int nonsignificant = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto s = sample_von_mises(0.0, 0.0, 500, 900 + seed);
      const double rbar = mean_resultant(s.values);
      if (2.0 * 500 * rbar * rbar < 9.210) ++nonsignificant;  // Rayleigh, 1%
    }
    CHECK(nonsignificant >= 9);
  }
  SECTION("high concentration pins the mean") {
    const auto s = sample_von_mises(1.0, 50.0, 1000, 77);
    CHECK(std::abs(circular_mean(s) - 1.0) < 0.05);
    for (double v : s.values) REQUIRE((v >= 0.0 && v < two_pi));
  }
  SECTION("negative kappa is rejected") {
    CHECK_THROWS_AS(sample_von_mises(0.0, -1.0, 10, 0), std::domain_error);
  }
}

TEST_CASE("sine model sampler") {
  SECTION("independence case accepts every proposal") {
    const auto s = sample_vm_sine({0.5, 1.5, 2, 2, 0}, 2000, 11);
    CHECK(s.acceptance_rate == 1.0);
  }
  SECTION("association sign follows kappa3") {
    const auto pos = sample_vm_sine({0.5, 1.5, 2, 2, 2}, 5000, 21).pairs;
    const auto neg = sample_vm_sine({0.5, 1.5, 2, 2, -2}, 5000, 22).pairs;
    const double se = 1.0 / std::sqrt(5000.0);
    CHECK(sine_correlation(pos, 0.5, 1.5) > 3 * se);
    CHECK(sine_correlation(neg, 0.5, 1.5) < -3 * se);
  }
  SECTION("acceptance rate stays above the envelope bound") {
    const auto s = sample_vm_sine({0, 0, 2, 2, 2}, 20000, 31);
    CHECK(s.acceptance_rate >= std::exp(-2.0) - 0.02);
  }
  SECTION("phi marginal matches quadrature for dependent draws") {
    const double k1 = 2, k2 = 2, k3 = 2;
    const auto pairs = sample_vm_sine({0, 0, k1, k2, k3}, 10000, 41).pairs;
    const int bins = 24;
    std::vector<double> observed(bins, 0.0), expected(bins, 0.0);
    for (const auto& p : pairs) {
      observed[static_cast<int>(p.phi / (two_pi / bins)) % bins] += 1.0;
    }
    double total = 0.0;
    const int sub = 50;  // quadrature points per bin
    for (int b = 0; b < bins; ++b) {
      for (int j = 0; j < sub; ++j) {
        const double phi = (b + (j + 0.5) / sub) * two_pi / bins;
        expected[b] += sine_marginal(phi, k1, k2, k3);
      }
      total += expected[b];
    }
    double chi2 = 0.0;
    for (int b = 0; b < bins; ++b) {
      const double e = expected[b] / total * pairs.size();
      chi2 += (observed[b] - e) * (observed[b] - e) / e;
    }
    CHECK(chi2 < 41.638);  // chi-square 0.99 quantile, 23 df
  }
}

TEST_CASE("cosine model sampler") {
  SECTION("independence case accepts every proposal") {
    const auto s = sample_vm_cosine({0.5, 1.5, 2, 2, 0}, 2000, 51);
    CHECK(s.acceptance_rate == 1.0);
  }
  SECTION("positive kappa3 couples the angles") {
    const auto pairs = sample_vm_cosine({0.5, 1.5, 2, 2, 2}, 5000, 61).pairs;
    CHECK(sine_correlation(pairs, 0.5, 1.5) > 3.0 / std::sqrt(5000.0));
  }
}

TEST_CASE("Fisher sampler") {
  SECTION("range and unit-norm contracts") {
    const auto pairs = sample_fisher({0.9, 2.2, 5.0}, 2000, 71).pairs;
    for (const auto& p : pairs) {
      REQUIRE((p.phi >= 0.0 && p.phi < two_pi));
      REQUIRE((p.theta >= 0.0 && p.theta < pi));
      const double x1 = std::cos(p.theta);
      const double x2 = std::sin(p.theta) * std::cos(p.phi);
      const double x3 = std::sin(p.theta) * std::sin(p.phi);
      REQUIRE(std::abs(x1 * x1 + x2 * x2 + x3 * x3 - 1.0) <= 1e-12);
    }
  }
  SECTION("kappa 0 is uniform on the sphere") {
    const auto pairs = sample_fisher({0.3, 1.0, 0.0}, 5000, 81).pairs;
    double x = 0.0, y = 0.0, z = 0.0;
    for (const auto& p : pairs) {
      x += std::cos(p.theta);
      y += std::sin(p.theta) * std::cos(p.phi);
      z += std::sin(p.theta) * std::sin(p.phi);
    }
    CHECK(std::sqrt(x * x + y * y + z * z) / pairs.size() < 0.05);
  }
  SECTION("high concentration recovers the mean direction") {
    const double alpha = pi / 4, beta = pi / 3;
    const auto pairs = sample_fisher({alpha, beta, 50.0}, 2000, 91).pairs;
    double x = 0.0, y = 0.0, z = 0.0;
    for (const auto& p : pairs) {
      x += std::cos(p.theta);
      y += std::sin(p.theta) * std::cos(p.phi);
      z += std::sin(p.theta) * std::sin(p.phi);
    }
    const double norm = std::sqrt(x * x + y * y + z * z);
    const double alpha_hat = std::acos(x / norm);
    const double beta_hat = std::atan2(z, y);
    CHECK(std::abs(alpha_hat - alpha) < 0.05);
    CHECK(std::abs(beta_hat - beta) < 0.05);
  }
  SECTION("negative kappa is rejected") {
    CHECK_THROWS_AS(sample_fisher({0, 0, -0.5}, 10, 0), std::domain_error);
  }
  SECTION("colatitude marginal matches the closed form at the pole") {
    // mean at the pole: f(theta) ~ sin(theta) * exp(kappa*cos(theta))
    const double kappa = 2.0;
    const auto pairs = sample_fisher({0.0, 0.0, kappa}, 10000, 101).pairs;
    const int bins = 16;  // equal bins on [0, 0.8*pi], far tail lumped
    const double hi = 0.8 * pi;
    std::vector<double> observed(bins + 1, 0.0), expected(bins + 1, 0.0);
    for (const auto& p : pairs) {
      observed[p.theta < hi ? static_cast<int>(p.theta / (hi / bins)) : bins] += 1;
    }
    const int sub = 200;
    double total = 0.0;
    for (int b = 0; b <= bins; ++b) {
      const double lo_b = b < bins ? b * hi / bins : hi;
      const double hi_b = b < bins ? (b + 1) * hi / bins : pi;
      for (int j = 0; j < sub; ++j) {
        const double th = lo_b + (hi_b - lo_b) * (j + 0.5) / sub;
        expected[b] += (hi_b - lo_b) * std::sin(th) * std::exp(kappa * std::cos(th));
      }
      total += expected[b];
    }
    double chi2 = 0.0;
    for (int b = 0; b <= bins; ++b) {
      const double e = expected[b] / total * pairs.size();
      chi2 += (observed[b] - e) * (observed[b] - e) / e;
    }
    CHECK(chi2 < 32.000);  // chi-square 0.99 quantile, 16 df
  }
}
