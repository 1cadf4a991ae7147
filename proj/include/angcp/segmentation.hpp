#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "angcp/circular.hpp"
#include "angcp/cusum.hpp"
#include "angcp/surface.hpp"

namespace angcp {

struct SegmentationConfig {
  double alpha = 0.05;          // per-test level, uncorrected by default
  std::size_t min_segment = 20; // only segments >= 2*min_segment are tested
  std::size_t max_depth = 0;    // 0 = unlimited
  bool bonferroni = false;      // divide alpha by the max number of testable segments
  double det_epsilon = 1e-12;
};

/// One rejected split: the tested segment, the estimated changepoint (global
/// 1-based index) and the test's p-value.
struct ChangepointEntry {
  std::size_t segment_start = 0;
  std::size_t segment_end = 0;
  std::size_t khat = 0;
  double p_value = 1.0;
};

/// Homogeneous segment with per-coordinate mean directions (radians).
/// mean_defined is false when a coordinate's resultant length vanished.
struct SegmentSummary {
  std::size_t start = 0;
  std::size_t end = 0;
  double mean_phi = 0.0;
  double mean_theta = 0.0;
  bool mean_defined = true;
};

struct SegmentWarning {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string message;
};

struct ChangepointReport {
  std::vector<ChangepointEntry> entries;   // sorted by start, wider first
  std::vector<SegmentSummary> segments;    // partition of 1..n
  std::vector<SegmentWarning> warnings;    // branches skipped on test errors
  std::size_t tests_run = 0;
};

/// Circular means per coordinate on the segments cut at the given boundaries
/// (sorted 1-based indices; boundary b closes the segment [.., b]).
inline std::vector<SegmentSummary> segment_summaries(
    const std::vector<AngularPair>& pairs, const SurfaceSpec& surface,
    const std::vector<std::size_t>& boundaries) {
  validate_surface(surface);
  const std::size_t n = pairs.size();
  if (n == 0) {
    throw std::domain_error("segment summaries of an empty sample");
  }
  if (!std::is_sorted(boundaries.begin(), boundaries.end())) {
    throw std::domain_error("segment boundaries must be sorted");
  }
  for (std::size_t b : boundaries) {
    if (b < 1 || b >= n) {
      throw std::domain_error("segment boundary outside 1..n-1");
    }
  }
  const double tp = theta_period(surface);
  std::vector<SegmentSummary> out;
  std::size_t start = 1;
  for (std::size_t cut = 0; cut <= boundaries.size(); ++cut) {
    const std::size_t end = cut < boundaries.size() ? boundaries[cut] : n;
    std::vector<double> phis, thetas;
    phis.reserve(end - start + 1);
    thetas.reserve(end - start + 1);
    for (std::size_t i = start; i <= end; ++i) {
      phis.push_back(pairs[i - 1].phi);
      thetas.push_back(pairs[i - 1].theta);
    }
    SegmentSummary s{start, end, 0.0, 0.0, true};
    try {
      s.mean_phi = detail::circular_mean_impl(phis, two_pi);
      s.mean_theta = detail::circular_mean_impl(thetas, tp);
    } catch (const degeneracy_error&) {
      s.mean_phi = std::numeric_limits<double>::quiet_NaN();
      s.mean_theta = std::numeric_limits<double>::quiet_NaN();
      s.mean_defined = false;
    }
    out.push_back(s);
    start = end + 1;
  }
  return out;
}

namespace detail {

inline void segment_recurse(const std::vector<AngularPair>& pairs,
                            const SurfaceSpec& surface,
                            const SegmentationConfig& config, double level,
                            std::size_t lo, std::size_t hi, std::size_t depth,
                            ChangepointReport& report) {
  const std::size_t len = hi - lo + 1;
  if (len < 2 * config.min_segment) return;
  if (config.max_depth != 0 && depth >= config.max_depth) return;

  std::vector<AngularPair> window(pairs.begin() + static_cast<long>(lo) - 1,
                                  pairs.begin() + static_cast<long>(hi));
  ++report.tests_run;
  CusumResult r;
  try {
    r = detect_changepoint(window, {level, surface, config.det_epsilon});
  } catch (const degeneracy_error& e) {
    report.warnings.push_back({lo, hi, e.what()});
    return;
  }
  if (!(r.p_value < level)) return;

  const std::size_t khat = lo + r.khat - 1;  // r.khat is local and 1-based
  report.entries.push_back({lo, hi, khat, r.p_value});
  segment_recurse(pairs, surface, config, level, lo, khat, depth + 1, report);
  segment_recurse(pairs, surface, config, level, khat + 1, hi, depth + 1, report);
}

}  // namespace detail

/// Multiple-changepoint discovery: recursively run the single-changepoint
/// test, split [start, khat] / [khat+1, end] on each rejection, and stop on
/// segments shorter than 2*min_segment or on acceptance. Branches whose test
/// degenerates are skipped with a warning record.
inline ChangepointReport binary_segment(const std::vector<AngularPair>& pairs,
                                        const SurfaceSpec& surface,
                                        const SegmentationConfig& config) {
  validate_surface(surface);
  if (config.min_segment < 4) {
    throw std::domain_error("min_segment must be at least 4");
  }
  if (pairs.size() < config.min_segment) {
    throw std::domain_error("sample shorter than min_segment");
  }
  double level = config.alpha;
  if (config.bonferroni) {
    const std::size_t max_tests =
        std::max<std::size_t>(1, pairs.size() / config.min_segment);
    level = config.alpha / static_cast<double>(max_tests);
  }

  ChangepointReport report;
  detail::segment_recurse(pairs, surface, config, level, 1, pairs.size(), 0,
                          report);
  std::sort(report.entries.begin(), report.entries.end(),
            [](const ChangepointEntry& a, const ChangepointEntry& b) {
              if (a.segment_start != b.segment_start)
                return a.segment_start < b.segment_start;
              return a.segment_end > b.segment_end;
            });
  std::vector<std::size_t> cuts;
  cuts.reserve(report.entries.size());
  for (const auto& e : report.entries) cuts.push_back(e.khat);
  std::sort(cuts.begin(), cuts.end());
  report.segments = segment_summaries(pairs, surface, cuts);
  return report;
}

}  // namespace angcp
