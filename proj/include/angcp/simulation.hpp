#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <thread>
#include <variant>
#include <vector>

#include "angcp/cusum.hpp"
#include "angcp/kolmogorov.hpp"
#include "angcp/samplers.hpp"
#include "angcp/surface.hpp"

namespace angcp {

using ModelSpec = std::variant<SineModelParams, CosineModelParams, FisherParams>;

inline SurfaceSpec model_surface(const ModelSpec& model, double torus_ratio) {
  return std::holds_alternative<FisherParams>(model)
             ? SurfaceSpec::sphere()
             : SurfaceSpec::torus(torus_ratio);
}

inline std::vector<AngularPair> sample_with(const SineModelParams& p,
                                            std::size_t n, std::uint64_t seed,
                                            std::uint64_t stream) {
  return sample_vm_sine(p, n, seed, stream).pairs;
}

inline std::vector<AngularPair> sample_with(const CosineModelParams& p,
                                            std::size_t n, std::uint64_t seed,
                                            std::uint64_t stream) {
  return sample_vm_cosine(p, n, seed, stream).pairs;
}

inline std::vector<AngularPair> sample_with(const FisherParams& p,
                                            std::size_t n, std::uint64_t seed,
                                            std::uint64_t stream) {
  return sample_fisher(p, n, seed, stream).pairs;
}

inline std::vector<AngularPair> sample_model(const ModelSpec& model,
                                             std::size_t n, std::uint64_t seed,
                                             std::uint64_t stream) {
  return std::visit(
      [&](const auto& params) { return sample_with(params, n, seed, stream); },
      model);
}

struct NullExperimentConfig {
  ModelSpec model = SineModelParams{};
  double torus_ratio = 0.5;
  std::size_t n = 1000;
  std::size_t reps = 2000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware_concurrency
};

struct NullExperimentResult {
  std::vector<double> statistics;  // one per successful replication, in order
  double rejection_rate = 0.0;
  double ks_distance = 0.0;  // empirical CDF vs the Kolmogorov CDF
  std::size_t errors = 0;
};

struct PowerGridConfig {
  ModelSpec model = SineModelParams{};
  double torus_ratio = 0.5;
  double kstar_fraction = 0.5;
  std::vector<double> delta_phi_grid;
  std::vector<double> delta_theta_grid;
  std::size_t n = 500;
  std::size_t reps = 2000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct PowerGridResult {
  std::vector<double> delta_phi_grid;
  std::vector<double> delta_theta_grid;
  std::vector<std::vector<double>> rates;  // rates[i_theta][j_phi]
  std::size_t errors = 0;
};

namespace detail {

// Run fn(rep) for rep = 0..reps-1, collecting results into per-rep slots.
// Work is chunked over threads; every replication owns its RNG substream so
// the output is independent of the schedule.
template <typename Fn>
inline void run_replications(std::size_t reps, unsigned threads, Fn&& fn) {
  unsigned workers = threads ? threads : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, std::max<std::size_t>(reps, 1)));
  if (workers <= 1) {
    for (std::size_t r = 0; r < reps; ++r) fn(r);
    return;
  }
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t r = w; r < reps; r += workers) fn(r);
    }));
  }
  for (auto& f : futures) f.get();
}

inline void apply_shift(std::vector<AngularPair>& pairs, std::size_t kstar,
                        double delta_phi, double delta_theta,
                        const SurfaceSpec& surface) {
  const double tp = theta_period(surface);
  for (std::size_t i = kstar; i < pairs.size(); ++i) {
    pairs[i].phi = wrap_angle(pairs[i].phi + delta_phi, two_pi);
    pairs[i].theta = wrap_angle(pairs[i].theta + delta_theta, tp);
  }
}

// Kolmogorov-Smirnov distance between the sample and the Kolmogorov CDF.
inline double ks_distance_to_kolmogorov(std::vector<double> stats) {
  std::sort(stats.begin(), stats.end());
  const double n = static_cast<double>(stats.size());
  double d = 0.0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const double f = kolmogorov_cdf(stats[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(i / n - f));
  }
  return d;
}

}  // namespace detail

/// Distribution of the test statistic under the null: `reps` fresh datasets,
/// one test each. Reports the statistic list, the rejection rate at `alpha`
/// and the KS distance between the statistics and the Kolmogorov CDF.
/// Failed replications are counted, not fatal.
inline NullExperimentResult null_experiment(const NullExperimentConfig& config) {
  if (config.reps < 100) throw std::domain_error("null experiment needs reps >= 100");
  if (config.n < 50) throw std::domain_error("null experiment needs n >= 50");
  const SurfaceSpec surface = model_surface(config.model, config.torus_ratio);
  const TestConfig test{config.alpha, surface, 1e-12};
  const double cutoff = kolmogorov_quantile(config.alpha);

  std::vector<double> slots(config.reps,
                            std::numeric_limits<double>::quiet_NaN());
  detail::run_replications(config.reps, config.threads, [&](std::size_t rep) {
    try {
      const auto pairs = sample_model(config.model, config.n, config.seed, rep);
      slots[rep] = detect_changepoint(pairs, test).statistic;
    } catch (const degeneracy_error&) {
    } catch (const std::domain_error&) {
    }
  });

  NullExperimentResult result;
  result.statistics.reserve(config.reps);
  std::size_t rejected = 0;
  for (double s : slots) {
    if (std::isnan(s)) {
      ++result.errors;
      continue;
    }
    result.statistics.push_back(s);
    if (s > cutoff) ++rejected;
  }
  if (!result.statistics.empty()) {
    result.rejection_rate =
        static_cast<double>(rejected) / static_cast<double>(result.statistics.size());
    result.ks_distance = detail::ks_distance_to_kolmogorov(result.statistics);
  }
  return result;
}

/// Power surface over a grid of mean-direction shifts inserted at
/// k* = floor(kstar_fraction * n): observations after k* are rotated by
/// (delta_phi, delta_theta). One rejection rate per grid cell.
inline PowerGridResult power_grid(const PowerGridConfig& config) {
  if (config.delta_phi_grid.empty() || config.delta_theta_grid.empty()) {
    throw std::domain_error("power grid needs nonempty shift grids");
  }
  if (!(config.kstar_fraction > 0.0 && config.kstar_fraction < 1.0)) {
    throw std::domain_error("kstar_fraction must lie in (0, 1)");
  }
  const SurfaceSpec surface = model_surface(config.model, config.torus_ratio);
  const TestConfig test{config.alpha, surface, 1e-12};
  const double cutoff = kolmogorov_quantile(config.alpha);
  const std::size_t kstar =
      static_cast<std::size_t>(config.kstar_fraction * static_cast<double>(config.n));

  PowerGridResult result;
  result.delta_phi_grid = config.delta_phi_grid;
  result.delta_theta_grid = config.delta_theta_grid;
  result.rates.assign(config.delta_theta_grid.size(),
                      std::vector<double>(config.delta_phi_grid.size(), 0.0));

  const std::size_t cells =
      config.delta_phi_grid.size() * config.delta_theta_grid.size();
  std::vector<std::size_t> cell_errors(cells, 0);
  for (std::size_t ti = 0; ti < config.delta_theta_grid.size(); ++ti) {
    for (std::size_t pj = 0; pj < config.delta_phi_grid.size(); ++pj) {
      const std::size_t cell = ti * config.delta_phi_grid.size() + pj;
      std::vector<int> outcome(config.reps, -1);
      detail::run_replications(config.reps, config.threads, [&](std::size_t rep) {
        try {
          auto pairs = sample_model(config.model, config.n, config.seed,
                                    cell * config.reps + rep);
          detail::apply_shift(pairs, kstar, config.delta_phi_grid[pj],
                              config.delta_theta_grid[ti], surface);
          outcome[rep] =
              detect_changepoint(pairs, test).statistic > cutoff ? 1 : 0;
        } catch (const degeneracy_error&) {
        } catch (const std::domain_error&) {
        }
      });
      std::size_t ok = 0, rejected = 0;
      for (int o : outcome) {
        if (o < 0) {
          ++cell_errors[cell];
          continue;
        }
        ++ok;
        rejected += static_cast<std::size_t>(o);
      }
      result.rates[ti][pj] =
          ok ? static_cast<double>(rejected) / static_cast<double>(ok) : 0.0;
    }
  }
  for (std::size_t e : cell_errors) result.errors += e;
  return result;
}

/// Finite-sample alternative to the asymptotic p-value: the rank of an
/// observed statistic among simulated null statistics (add-one rule, so the
/// result lies in (0, 1]). Not the default anywhere; the tests themselves
/// use the Kolmogorov law.
inline double simulated_null_pvalue(double statistic,
                                    const std::vector<double>& null_statistics) {
  if (null_statistics.empty()) {
    throw std::domain_error("simulated null p-value needs null statistics");
  }
  std::size_t at_least = 0;
  for (double s : null_statistics) {
    if (s >= statistic) ++at_least;
  }
  return (1.0 + static_cast<double>(at_least)) /
         (1.0 + static_cast<double>(null_statistics.size()));
}

/// Equispaced symmetric grid of `count` shifts on [-half_range, half_range].
inline std::vector<double> symmetric_grid(double half_range, std::size_t count) {
  if (count == 0) throw std::domain_error("grid needs at least one point");
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = 0.0;
    return grid;
  }
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = -half_range +
              2.0 * half_range * static_cast<double>(i) /
                  static_cast<double>(count - 1);
  }
  return grid;
}

}  // namespace angcp
