#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "angcp/samplers.hpp"
#include "angcp/segmentation.hpp"

using namespace angcp;

namespace {

std::vector<AngularPair> two_shift_data(std::uint64_t seed, std::size_t n = 600,
                                        std::size_t c1 = 200,
                                        std::size_t c2 = 400) {
  auto pairs = sample_vm_sine({0, 0, 2, 2, 0}, n, seed).pairs;
  for (std::size_t i = c1; i < pairs.size(); ++i) {
    pairs[i].phi = wrap_angle(pairs[i].phi + pi / 2, two_pi);
    pairs[i].theta = wrap_angle(pairs[i].theta + pi / 2, two_pi);
  }
  for (std::size_t i = c2; i < pairs.size(); ++i) {
    pairs[i].phi = wrap_angle(pairs[i].phi + pi / 2, two_pi);
    pairs[i].theta = wrap_angle(pairs[i].theta + pi / 2, two_pi);
  }
  return pairs;
}

bool partitions(const std::vector<SegmentSummary>& segments, std::size_t n) {
  if (segments.empty()) return false;
  std::size_t expect = 1;
  for (const auto& s : segments) {
    if (s.start != expect || s.end < s.start) return false;
    expect = s.end + 1;
  }
  return expect == n + 1;
}

}  // namespace

TEST_CASE("homogeneous data yields one segment") {
  const auto pairs = sample_vm_sine({1, 2, 2, 2, 0}, 300, 1234).pairs;
  const auto report = binary_segment(pairs, SurfaceSpec::torus(0.5), {});
  CHECK(report.entries.empty());
  REQUIRE(report.segments.size() == 1);
  CHECK(report.segments[0].start == 1);
  CHECK(report.segments[0].end == 300);
  CHECK(report.tests_run == 1);
}

TEST_CASE("two strong shifts are both recovered") {
  const auto pairs = two_shift_data(2718);
  const auto report = binary_segment(pairs, SurfaceSpec::torus(0.5), {});
  REQUIRE(report.entries.size() == 2);
  std::vector<std::size_t> khats{report.entries[0].khat, report.entries[1].khat};
  std::sort(khats.begin(), khats.end());
  CHECK(std::abs(static_cast<long>(khats[0]) - 200L) <= 15);
  CHECK(std::abs(static_cast<long>(khats[1]) - 400L) <= 15);
  CHECK(partitions(report.segments, pairs.size()));
  REQUIRE(report.segments.size() == 3);
  for (const auto& e : report.entries) REQUIRE(e.p_value < 0.05);
  CHECK(report.tests_run <= 2 * report.entries.size() + 1);

  // entries are ordered parent-first within a shared start
  CHECK(report.entries[0].segment_start == 1);
  CHECK(report.entries[0].segment_end == 600);
}

TEST_CASE("segments shorter than twice min_segment are never tested") {
  const auto pairs = sample_vm_sine({0, 0, 2, 2, 0}, 30, 5).pairs;
  const auto report =
      binary_segment(pairs, SurfaceSpec::torus(0.5), {0.05, 20, 0, false});
  CHECK(report.tests_run == 0);
  CHECK(report.entries.empty());
  REQUIRE(report.segments.size() == 1);
  CHECK(partitions(report.segments, 30));
}

TEST_CASE("max_depth limits the recursion") {
  const auto pairs = two_shift_data(31415);
  SegmentationConfig config;
  config.max_depth = 1;
  const auto report = binary_segment(pairs, SurfaceSpec::torus(0.5), config);
  CHECK(report.entries.size() <= 1);
  CHECK(report.tests_run <= 1);
}

TEST_CASE("segmentation is deterministic") {
  const auto pairs = two_shift_data(99);
  const auto a = binary_segment(pairs, SurfaceSpec::torus(0.5), {});
  const auto b = binary_segment(pairs, SurfaceSpec::torus(0.5), {});
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].khat == b.entries[i].khat);
    CHECK(a.entries[i].p_value == b.entries[i].p_value);
  }
}

TEST_CASE("degenerate half-segments are skipped with warnings") {
  // constant first half: the root splits, the left child's dispersion is
  // singular and that branch is recorded instead of aborting the report
  std::vector<AngularPair> pairs(50, {0.05, 0.05});
  const auto tail = sample_vm_sine({pi, pi, 50, 50, 0}, 30, 404).pairs;
  pairs.insert(pairs.end(), tail.begin(), tail.end());
  const auto report =
      binary_segment(pairs, SurfaceSpec::torus(0.5), {0.05, 20, 0, false});
  REQUIRE(report.entries.size() == 1);
  CHECK(std::abs(static_cast<long>(report.entries[0].khat) - 50L) <= 3);
  REQUIRE(report.warnings.size() == 1);
  CHECK(report.warnings[0].start == 1);
  CHECK(partitions(report.segments, 80));
}

TEST_CASE("input validation") {
  const auto pairs = sample_vm_sine({0, 0, 2, 2, 0}, 10, 5).pairs;
  CHECK_THROWS_AS(
      binary_segment(pairs, SurfaceSpec::torus(0.5), {0.05, 20, 0, false}),
      std::domain_error);
  CHECK_THROWS_AS(
      binary_segment(pairs, SurfaceSpec::torus(0.5), {0.05, 3, 0, false}),
      std::domain_error);
}

TEST_CASE("segment summaries") {
  SECTION("degenerate segments reproduce their point") {
    std::vector<AngularPair> pairs(40, {1.0, 2.0});
    pairs.resize(100, {0.25, 5.5});
    const auto sums =
        segment_summaries(pairs, SurfaceSpec::torus(0.5), {40});
    REQUIRE(sums.size() == 2);
    CHECK(sums[0].mean_phi == Catch::Approx(1.0).margin(1e-12));
    CHECK(sums[0].mean_theta == Catch::Approx(2.0).margin(1e-12));
    CHECK(sums[1].mean_phi == Catch::Approx(0.25).margin(1e-12));
    CHECK(sums[1].mean_theta == Catch::Approx(5.5).margin(1e-12));
    CHECK((sums[0].start == 1 && sums[0].end == 40));
    CHECK((sums[1].start == 41 && sums[1].end == 100));
  }
  SECTION("sampled segment means sit near the model means") {
    const auto pairs = sample_vm_sine({pi / 3, pi / 2, 5, 5, 0}, 2000, 12).pairs;
    const auto sums = segment_summaries(pairs, SurfaceSpec::torus(0.5), {});
    REQUIRE(sums.size() == 1);
    // SE of a circular mean at kappa=5 is about 1/sqrt(n*kappa)
    const double se = 1.0 / std::sqrt(2000.0 * 5.0);
    CHECK(std::abs(sums[0].mean_phi - pi / 3) < 3 * se);
    CHECK(std::abs(sums[0].mean_theta - pi / 2) < 3 * se);
  }
  SECTION("zero-resultant segments are flagged") {
    std::vector<AngularPair> pairs{{0.0, 1.0}, {pi, 1.0}, {0.0, 1.0}, {pi, 1.0}};
    const auto sums = segment_summaries(pairs, SurfaceSpec::torus(0.5), {});
    REQUIRE(sums.size() == 1);
    CHECK_FALSE(sums[0].mean_defined);
  }
  SECTION("boundary validation") {
    std::vector<AngularPair> pairs(10, {1.0, 2.0});
    CHECK_THROWS_AS(segment_summaries(pairs, SurfaceSpec::torus(0.5), {10}),
                    std::domain_error);
    CHECK_THROWS_AS(segment_summaries(pairs, SurfaceSpec::torus(0.5), {5, 3}),
                    std::domain_error);
  }
}
