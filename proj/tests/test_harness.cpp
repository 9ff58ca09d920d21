#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rangebench/harness.hpp"
#include "support/generators.hpp"

using namespace rangebench;
using namespace rangebench::testsupport;

namespace {
const Aabb kUnit{{0, 0, 0}, {1, 1, 1}};

QueryWorkload tiny_workload(std::uint64_t seed) {
    QueryWorkload workload;
    const std::array<double, 4> sides{0.02, 0.1, 0.2, 0.45};
    for (int c = 0; c < 4; ++c) {
        workload.classes[c].class_index = c;
        workload.classes[c].side = sides[c];
        std::mt19937_64 rng(seed + c);
        for (int i = 0; i < 10; ++i) {
            workload.classes[c].queries.push_back(random_cube(rng, kUnit, sides[c]));
        }
    }
    return workload;
}
}  // namespace

TEST_CASE("throughput classes replay the small-scale x-small column") {
    const std::array<double, 4> values{47900.0, 36100.0, 4290.0, 99.5};
    const auto classes = classify_throughput(values);
    CHECK(classes[0] == ThroughputClass::Fast);
    CHECK(classes[1] == ThroughputClass::Fast);
    CHECK(classes[2] == ThroughputClass::Moderate);
    CHECK(classes[3] == ThroughputClass::Slow);
}

TEST_CASE("throughput boundaries are ties-to-better") {
    const std::array<double, 2> exactly_ten{100.0, 10.0};
    const auto ten = classify_throughput(exactly_ten);
    CHECK(ten[0] == ThroughputClass::Fast);
    CHECK(ten[1] == ThroughputClass::Fast);

    const std::array<double, 2> exactly_hundred{1000.0, 10.0};
    const auto hundred = classify_throughput(exactly_hundred);
    CHECK(hundred[1] == ThroughputClass::Moderate);

    const std::array<double, 1> single{5.0};
    CHECK(classify_throughput(single)[0] == ThroughputClass::Fast);

    CHECK_THROWS_AS(classify_throughput({}), std::invalid_argument);
}

TEST_CASE("memory classes replay the small-scale table") {
    const std::size_t raw = 29'200'000;
    CHECK(classify_memory(20'700'000, raw) == MemoryClass::Low);
    CHECK(classify_memory(105'000'000, raw) == MemoryClass::Moderate);
    CHECK(classify_memory(612'000'000, raw) == MemoryClass::High);
}

TEST_CASE("memory boundaries: 2x inclusive, 5x exclusive") {
    CHECK(classify_memory(200, 100) == MemoryClass::Low);
    CHECK(classify_memory(201, 100) == MemoryClass::Moderate);
    CHECK(classify_memory(499, 100) == MemoryClass::Moderate);
    CHECK(classify_memory(500, 100) == MemoryClass::High);
    CHECK_THROWS_AS(classify_memory(1, 0), std::invalid_argument);
}

TEST_CASE("strong scaling replays the point-scaling table") {
    MetricSet small_side;
    small_side.insertions = 1.0;
    small_side.queries = {1.0, 1.0, 1.0, 1.0};
    small_side.mem_bytes = 1.0;
    small_side.peak_mem_bytes = 1.0;
    MetricSet large_side;
    large_side.insertions = 0.93;
    large_side.queries = {0.81, 0.26, 0.15, 0.31};
    large_side.mem_bytes = 7.76;
    large_side.peak_mem_bytes = 8.26;

    const ScalingReport report = strong_scaling(small_side, large_side, 8.28);
    CHECK(report.good_threshold == doctest::Approx(0.328).epsilon(2e-3));
    CHECK(report.entries[0].rating == ScalingClass::Good);      // insertions 0.93
    CHECK(report.entries[1].rating == ScalingClass::Good);      // 0.81
    CHECK(report.entries[2].rating == ScalingClass::Moderate);  // 0.26
    CHECK(report.entries[3].rating == ScalingClass::Poor);      // 0.15
    CHECK(report.entries[4].rating == ScalingClass::Moderate);  // 0.31
    CHECK(report.entries[5].rating == ScalingClass::Good);      // mem 7.76 < 8.28
    CHECK(report.entries[6].rating == ScalingClass::Good);      // peak 8.26 < 8.28
}

TEST_CASE("strong scaling thresholds at g = 10") {
    MetricSet small_side;
    small_side.insertions = 1.0;
    small_side.queries = {1.0, 1.0, 1.0, 1.0};
    small_side.mem_bytes = 1.0;
    small_side.peak_mem_bytes = 1.0;
    MetricSet large_side = small_side;
    large_side.queries = {0.27, 0.3011, 0.15, 0.1506};
    large_side.mem_bytes = 10.0;   // exactly linear: Moderate, not Good
    large_side.peak_mem_bytes = 15.1;  // above 1.5x g: Poor

    const ScalingReport report = strong_scaling(small_side, large_side, 10.0);
    CHECK(report.good_threshold == doctest::Approx(0.301).epsilon(2e-3));
    CHECK(report.entries[1].rating == ScalingClass::Moderate);  // 0.27 in [0.1505, 0.301)
    CHECK(report.entries[2].rating == ScalingClass::Good);      // just above threshold
    CHECK(report.entries[3].rating == ScalingClass::Poor);      // below half threshold
    CHECK(report.entries[4].rating == ScalingClass::Moderate);  // just above half threshold
    CHECK(report.entries[5].rating == ScalingClass::Moderate);
    CHECK(report.entries[6].rating == ScalingClass::Poor);

    CHECK_THROWS_AS(strong_scaling(small_side, large_side, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(strong_scaling(small_side, large_side, 0.5), std::invalid_argument);
}

TEST_CASE("weak scaling replays the representative rows") {
    MetricSet baseline;
    baseline.insertions = 1.047;  // scaled run is 4.7% slower per insertion
    baseline.queries = {1.217, 1.389, 0.936, 1.0};
    MetricSet scaled;
    scaled.insertions = 1.0;
    scaled.queries = {1.0, 1.0, 1.0, 1.0};

    const ScalingReport report = weak_scaling(baseline, scaled);
    CHECK(report.entries[0].value == doctest::Approx(0.047).epsilon(1e-6));
    CHECK(report.entries[0].rating == ScalingClass::Good);      // +4.7%
    CHECK(report.entries[1].value == doctest::Approx(0.217).epsilon(1e-6));
    CHECK(report.entries[1].rating == ScalingClass::Moderate);  // +21.7%
    CHECK(report.entries[2].value == doctest::Approx(0.389).epsilon(1e-6));
    CHECK(report.entries[2].rating == ScalingClass::Poor);      // +38.9%
    CHECK(report.entries[3].rating == ScalingClass::Good);      // -6.4% improvement
}

TEST_CASE("weak boundaries: 10% and 25% inclusive") {
    // Exact boundary ratios are not representable through the division, so
    // probe tightly from both sides.
    MetricSet baseline;
    baseline.insertions = 1.0999;
    baseline.queries = {1.1001, 1.2499, 1.2501, 1.0};
    MetricSet scaled;
    scaled.insertions = 1.0;
    scaled.queries = {1.0, 1.0, 1.0, 1.0};
    const ScalingReport report = weak_scaling(baseline, scaled);
    CHECK(report.entries[0].rating == ScalingClass::Good);      // just below +10%
    CHECK(report.entries[1].rating == ScalingClass::Moderate);  // just above +10%
    CHECK(report.entries[2].rating == ScalingClass::Moderate);  // just below +25%
    CHECK(report.entries[3].rating == ScalingClass::Poor);      // just above +25%
}

TEST_CASE("engine-result scaling requires matching configurations") {
    EngineResult a;
    a.engine = "kd";
    a.config = "leaf=20";
    a.insertions_per_sec = 1.0;
    a.queries_per_sec = {1, 1, 1, 1};
    a.mem_bytes = 100;
    a.peak_mem_bytes = 100;
    EngineResult b = a;
    b.config = "leaf=200";
    CHECK_THROWS_AS(strong_scaling(a, b, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(weak_scaling(a, b), std::invalid_argument);
    b.config = a.config;
    CHECK_NOTHROW(strong_scaling(a, b, 8.0));
    CHECK_NOTHROW(weak_scaling(a, b));
}

TEST_CASE("measure_engine fills means, runs and memory invariants") {
    const auto points = random_points(20'000, kUnit, 80);
    const QueryWorkload workload = tiny_workload(81);

    EngineConfig cfg;
    cfg.kind = EngineKind::KdTree;
    cfg.leaf_size = 32;
    const EngineResult result = measure_engine<PointRecord>(cfg, points, workload);

    CHECK(result.engine == "kd");
    CHECK(result.config == "leaf=32");
    CHECK(result.record_count == 20'000);
    CHECK(result.insertions_per_sec > 0.0);
    double expected_mean = 0.0;
    for (const double v : result.insert_runs) {
        CHECK(v > 0.0);
        expected_mean += v / kMeasureRuns;
    }
    CHECK(result.insertions_per_sec == doctest::Approx(expected_mean));
    for (int c = 0; c < 4; ++c) {
        CHECK(result.queries_per_sec[c] > 0.0);
        double class_mean = 0.0;
        for (const double v : result.query_runs[c]) class_mean += v / kMeasureRuns;
        CHECK(result.queries_per_sec[c] == doctest::Approx(class_mean));
    }
    CHECK(result.mem_bytes > 0);
    CHECK(result.peak_mem_bytes >= result.mem_bytes);
    CHECK(result.mem_bytes >= 24u * 20'000u);  // at least the stored payload
}

TEST_CASE("record-kind mismatches are rejected") {
    const auto boxes = random_boxes(2'000, kUnit, 0.05, 82);
    const QueryWorkload workload = tiny_workload(83);
    EngineConfig octree_cfg;
    octree_cfg.kind = EngineKind::Octree;
    CHECK_THROWS_AS(measure_engine<BoxRecord>(octree_cfg, boxes, workload),
                    std::invalid_argument);
    EngineConfig kd_cfg;
    kd_cfg.kind = EngineKind::KdTree;
    CHECK_THROWS_AS(measure_engine<BoxRecord>(kd_cfg, boxes, workload), std::invalid_argument);
    EngineConfig rtree_cfg;
    rtree_cfg.kind = EngineKind::RTree;
    rtree_cfg.leaf_size = 16;
    CHECK_NOTHROW(measure_engine<BoxRecord>(rtree_cfg, boxes, workload));
}
