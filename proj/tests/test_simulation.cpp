#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "angcp/simulation.hpp"

using namespace angcp;

TEST_CASE("null experiment smoke run") {
  NullExperimentConfig config;
  config.model = SineModelParams{0, 0, 2, 2, 0};
  config.n = 50;
  config.reps = 100;
  config.seed = 17;
  const auto r = null_experiment(config);
  CHECK(r.statistics.size() == 100);
  CHECK(r.errors == 0);
  CHECK((r.rejection_rate >= 0.0 && r.rejection_rate <= 1.0));
  CHECK((r.ks_distance >= 0.0 && r.ks_distance <= 1.0));

  NullExperimentConfig sphere = config;
  sphere.model = FisherParams{0.5, 1.0, 2.0};
  const auto rs = null_experiment(sphere);
  CHECK(rs.statistics.size() == 100);
}

TEST_CASE("results are independent of the thread count") {
  NullExperimentConfig config;
  config.model = SineModelParams{0.4, 1.1, 2, 2, 1};
  config.n = 60;
  config.reps = 120;
  config.seed = 5;
  config.threads = 1;
  const auto serial = null_experiment(config);
  config.threads = 4;
  const auto parallel = null_experiment(config);
  REQUIRE(serial.statistics.size() == parallel.statistics.size());
  for (std::size_t i = 0; i < serial.statistics.size(); ++i) {
    REQUIRE(serial.statistics[i] == parallel.statistics[i]);
  }
}

TEST_CASE("config validation") {
  NullExperimentConfig config;
  config.reps = 50;
  CHECK_THROWS_AS(null_experiment(config), std::domain_error);
  config.reps = 100;
  config.n = 10;
  CHECK_THROWS_AS(null_experiment(config), std::domain_error);

  PowerGridConfig power;
  CHECK_THROWS_AS(power_grid(power), std::domain_error);  // empty grids
  power.delta_phi_grid = {0.0};
  power.delta_theta_grid = {0.0};
  power.kstar_fraction = 1.5;
  CHECK_THROWS_AS(power_grid(power), std::domain_error);
}

TEST_CASE("power grid separates null and shifted cells") {
  PowerGridConfig config;
  config.model = SineModelParams{0, 0, 2, 2, 0};
  config.n = 100;
  config.reps = 100;
  config.seed = 23;
  config.delta_phi_grid = {0.0, pi / 2};
  config.delta_theta_grid = {0.0, pi / 2};
  const auto r = power_grid(config);
  REQUIRE(r.rates.size() == 2);
  REQUIRE(r.rates[0].size() == 2);
  const double center = r.rates[0][0];
  const double corner = r.rates[1][1];
  CHECK(center < 0.2);
  CHECK(corner > center + 0.2);
  CHECK(r.errors == 0);
}

TEST_CASE("power is symmetric and grows with n for the symmetric model") {
  auto rate_at = [](std::size_t n, double shift, std::uint64_t seed) {
    PowerGridConfig config;
    config.model = SineModelParams{0, 0, 2, 2, 0};
    config.n = n;
    config.reps = 300;
    config.seed = seed;
    config.delta_phi_grid = {shift};
    config.delta_theta_grid = {shift};
    return power_grid(config).rates[0][0];
  };
  const double se = 3.0 * std::sqrt(0.25 / 300.0);

  // mirror-image shifts reject equally often
  CHECK(std::abs(rate_at(100, pi / 2, 7) - rate_at(100, -pi / 2, 8)) < 2 * se);

  // the corollary at desk scale: power climbs to one along n
  const double p100 = rate_at(100, pi / 2, 9);
  const double p250 = rate_at(250, pi / 2, 10);
  const double p500 = rate_at(500, pi / 2, 11);
  CHECK(p250 >= p100 - se);
  CHECK(p500 >= p250 - se);
  CHECK(p500 >= 0.99);
}

TEST_CASE("power is non-decreasing along a shift axis") {
  PowerGridConfig config;
  config.model = SineModelParams{0, 0, 2, 2, 0};
  config.n = 300;
  config.reps = 200;
  config.seed = 37;
  config.delta_phi_grid = {0.0, pi / 4, pi / 2};
  config.delta_theta_grid = {0.0};
  const auto r = power_grid(config);
  const double se = 3.0 * std::sqrt(0.25 / 200.0);
  CHECK(r.rates[0][1] >= r.rates[0][0] - se);
  CHECK(r.rates[0][2] >= r.rates[0][1] - se);
  CHECK(r.rates[0][2] > 0.5);
}

TEST_CASE("simulated-null p-values rank against the null sample") {
  const std::vector<double> null_stats{0.5, 0.8, 1.1, 1.4};
  CHECK(simulated_null_pvalue(2.0, null_stats) == Catch::Approx(1.0 / 5));
  CHECK(simulated_null_pvalue(1.0, null_stats) == Catch::Approx(3.0 / 5));
  CHECK(simulated_null_pvalue(0.0, null_stats) == 1.0);
  CHECK_THROWS_AS(simulated_null_pvalue(1.0, {}), std::domain_error);

  // against a real null ensemble, large statistics get small p
  NullExperimentConfig config;
  config.model = SineModelParams{0, 0, 2, 2, 0};
  config.n = 50;
  config.reps = 200;
  config.seed = 41;
  const auto r = null_experiment(config);
  CHECK(simulated_null_pvalue(3.0, r.statistics) < 0.05);
  CHECK(simulated_null_pvalue(0.01, r.statistics) > 0.95);
}

TEST_CASE("symmetric grids") {
  const auto g = symmetric_grid(pi / 2, 21);
  REQUIRE(g.size() == 21);
  CHECK(g.front() == Catch::Approx(-pi / 2));
  CHECK(g[10] == Catch::Approx(0.0).margin(1e-15));
  CHECK(g.back() == Catch::Approx(pi / 2));
  CHECK(symmetric_grid(1.0, 1).front() == 0.0);
}
