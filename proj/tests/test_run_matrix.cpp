#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "rangebench/report.hpp"
#include "support/generators.hpp"

using namespace rangebench;
using namespace rangebench::testsupport;

namespace {

Mesh small_mesh(std::uint64_t seed) {
    MeshSpec spec;
    spec.nx = spec.ny = spec.nz = 21;
    spec.jitter = 0.3;
    spec.seed = seed;
    return generate_mesh(spec);
}

MatrixConfig default_matrix(std::uint64_t seed, int workers) {
    MatrixConfig cfg;
    cfg.engines = {{EngineKind::BruteForce, 0, 0, 0},
                   {EngineKind::KdTree, 20, 0, 32},
                   {EngineKind::RTree, 20, 0, 32},
                   {EngineKind::Octree, 20, 0, 32}};
    cfg.kind = RecordKind::Points;
    cfg.mode = CountMode::Reduced;
    cfg.seed = seed;
    cfg.workers = workers;
    return cfg;
}

}  // namespace

TEST_CASE("reduced-mode matrix verifies everything and aggregates") {
    const Mesh mesh = small_mesh(90);
    const MatrixConfig cfg = default_matrix(91, 2);
    const BenchReport report = run_matrix(mesh, cfg);

    CHECK(report.workers == 2);
    CHECK(report.fully_checked);
    CHECK(report.ids_checksum > 0);
    REQUIRE(report.engines.size() == 4);
    REQUIRE(report.worker_reports.size() == 2);

    for (const EngineAggregate& e : report.engines) {
        CHECK(e.insertions.min <= e.insertions.mean);
        CHECK(e.insertions.mean <= e.insertions.max);
        for (int c = 0; c < 4; ++c) {
            CHECK(e.queries[c].min <= e.queries[c].mean);
            CHECK(e.queries[c].mean <= e.queries[c].max);
        }
        // Accounting floor: every engine stores at least the record payload.
        CHECK(e.mem_bytes.mean >= 24.0 * report.records_per_worker_mean);
        CHECK(e.peak_mem_bytes.mean >= e.mem_bytes.mean);
    }
    // Raw payload: mean worker record count times 24 bytes.
    CHECK(static_cast<double>(report.raw_bytes_per_worker) ==
          doctest::Approx(report.records_per_worker_mean * 24.0).epsilon(1e-9));

    const std::vector<CsvRow> rows = bench_csv_rows(report);
    CHECK(rows.size() == 4 * 7 + 1);  // 7 metric rows per engine plus the checksum row
    CHECK(rows.back().engine == "oracle");
    CHECK(rows.back().metric == "query_ids_checksum");
}

TEST_CASE("non-timing outputs are bit-identical across runs") {
    const Mesh mesh = small_mesh(92);
    const MatrixConfig cfg = default_matrix(93, 2);
    const BenchReport a = run_matrix(mesh, cfg);
    const BenchReport b = run_matrix(mesh, cfg);

    CHECK(a.ids_checksum == b.ids_checksum);
    for (int c = 0; c < 4; ++c) {
        CHECK(a.achieved_selectivity[c] == b.achieved_selectivity[c]);
    }

    const std::vector<CsvRow> rows_a = bench_csv_rows(a);
    const std::vector<CsvRow> rows_b = bench_csv_rows(b);
    REQUIRE(rows_a.size() == rows_b.size());
    for (std::size_t i = 0; i < rows_a.size(); ++i) {
        CHECK(rows_a[i].engine == rows_b[i].engine);
        CHECK(rows_a[i].config == rows_b[i].config);
        CHECK(rows_a[i].metric == rows_b[i].metric);
        const bool timing = rows_a[i].metric.find("per_sec") != std::string::npos;
        if (!timing) {
            CHECK(rows_a[i].value == rows_b[i].value);
            CHECK(rows_a[i].cls == rows_b[i].cls);
        }
    }
}

TEST_CASE("element runs reject point-only engines with the worker id") {
    const Mesh mesh = small_mesh(94);
    MatrixConfig cfg = default_matrix(95, 2);
    cfg.kind = RecordKind::Boxes;
    CHECK_THROWS_WITH_AS(run_matrix(mesh, cfg), doctest::Contains("worker"),
                         std::runtime_error);

    // Box engines work over sparse boxes. (Tiling mesh cells at this size
    // cannot reach the x-small selectivity target: any point overlaps a cell.)
    WorkerSubset subset;
    subset.elements = random_boxes(6000, Aabb{{0, 0, 0}, {1, 1, 1}}, 0.01, 950);
    cfg.engines = {{EngineKind::BruteForce, 0, 0, 0}, {EngineKind::RTree, 20, 0, 32}};
    const BenchReport report = run_matrix(std::vector<WorkerSubset>{subset}, cfg);
    CHECK(report.engines.size() == 2);
    CHECK(static_cast<double>(report.raw_bytes_per_worker) ==
          doctest::Approx(report.records_per_worker_mean * 48.0).epsilon(1e-9));
}

TEST_CASE("full mode audits a sample instead of everything") {
    const Mesh mesh = small_mesh(96);
    MatrixConfig cfg = default_matrix(97, 1);
    cfg.engines = {{EngineKind::BruteForce, 0, 0, 0}, {EngineKind::KdTree, 20, 0, 32}};
    cfg.mode = CountMode::Full;
    const BenchReport report = run_matrix(mesh, cfg);
    CHECK_FALSE(report.fully_checked);
    CHECK(bench_csv_rows(report).size() == 2 * 7);  // no checksum row

    cfg.check = true;
    const BenchReport checked = run_matrix(mesh, cfg);
    CHECK(checked.fully_checked);
    CHECK(bench_csv_rows(checked).size() == 2 * 7 + 1);
}

TEST_CASE("identical per-worker data gives consistent per-worker throughput") {
    // Timing comparability across concurrent workers needs real parallelism.
    if (std::thread::hardware_concurrency() < 8) {
        MESSAGE("skipping: needs >= 8 hardware threads, have ",
                std::thread::hardware_concurrency());
        return;
    }
    const auto points = random_points(50'000, Aabb{{0, 0, 0}, {1, 1, 1}}, 98);
    WorkerSubset subset;
    subset.points = points;

    MatrixConfig cfg = default_matrix(99, 1);
    cfg.engines = {{EngineKind::KdTree, 20, 0, 32}};

    const BenchReport solo = run_matrix(std::vector<WorkerSubset>{subset}, cfg);
    const BenchReport quad =
        run_matrix(std::vector<WorkerSubset>{subset, subset, subset, subset}, cfg);

    const double solo_rate = solo.engines[0].queries[0].mean;
    const double quad_rate = quad.engines[0].queries[0].mean;
    CHECK(std::abs(quad_rate / solo_rate - 1.0) < 0.20);
}

TEST_CASE("matrix rejects empty inputs") {
    const Mesh mesh = small_mesh(100);
    MatrixConfig cfg = default_matrix(101, 1);
    cfg.engines.clear();
    CHECK_THROWS_AS(run_matrix(mesh, cfg), std::invalid_argument);
    CHECK_THROWS_AS(run_matrix(std::vector<WorkerSubset>{}, default_matrix(102, 1)),
                    std::invalid_argument);
}
