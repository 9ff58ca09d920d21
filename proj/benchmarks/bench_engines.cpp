// Microbenchmarks for the individual engines: build throughput and per-class
// query latency on uniform synthetic data. The harness (tools/rangebench
// bench) remains the source of paper-style numbers; these exist for quick
// regression checks while hacking on a single tree.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "rangebench/brute_force.hpp"
#include "rangebench/kd_tree.hpp"
#include "rangebench/octree.hpp"
#include "rangebench/rng.hpp"
#include "rangebench/str_tree.hpp"

using namespace rangebench;

namespace {

const Aabb kUnit{{0, 0, 0}, {1, 1, 1}};

std::vector<PointRecord> uniform_points(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<PointRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        records.push_back({uniform_point_in(rng, kUnit), static_cast<RecordId>(i)});
    }
    return records;
}

std::vector<Aabb> cube_queries(std::size_t count, double selectivity, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Aabb> queries;
    queries.reserve(count);
    const double h = 0.5 * std::cbrt(selectivity);
    for (std::size_t i = 0; i < count; ++i) {
        const Point3 c = uniform_point_in(rng, kUnit);
        queries.push_back({{c.x - h, c.y - h, c.z - h}, {c.x + h, c.y + h, c.z + h}});
    }
    return queries;
}

template <typename Engine, typename Config>
void build_benchmark(benchmark::State& state, Config cfg) {
    const auto points = uniform_points(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        Engine engine(points, cfg);
        benchmark::DoNotOptimize(engine.size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <typename Engine, typename Config>
void query_benchmark(benchmark::State& state, Config cfg, double selectivity) {
    const auto points = uniform_points(static_cast<std::size_t>(state.range(0)), 2);
    const Engine engine(points, cfg);
    const auto queries = cube_queries(64, selectivity, 3);
    std::vector<RecordId> out;
    std::size_t qi = 0;
    for (auto _ : state) {
        engine.query_box(queries[qi++ % queries.size()], out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations());
}

void BM_KdBuild(benchmark::State& state) { build_benchmark<KdTree>(state, KdConfig{200}); }
void BM_StrBuild(benchmark::State& state) {
    build_benchmark<StrTreePoints>(state, RTreeConfig{200, 0});
}
void BM_OctBuild(benchmark::State& state) {
    build_benchmark<Octree>(state, OctConfig{200, 32});
}

void BM_KdQueryXSmall(benchmark::State& state) {
    query_benchmark<KdTree>(state, KdConfig{200}, 1e-5);
}
void BM_KdQueryLarge(benchmark::State& state) {
    query_benchmark<KdTree>(state, KdConfig{200}, 1e-1);
}
void BM_StrQueryXSmall(benchmark::State& state) {
    query_benchmark<StrTreePoints>(state, RTreeConfig{200, 0}, 1e-5);
}
void BM_StrQueryLarge(benchmark::State& state) {
    query_benchmark<StrTreePoints>(state, RTreeConfig{200, 0}, 1e-1);
}
void BM_OctQueryBoxAdapter(benchmark::State& state) {
    query_benchmark<Octree>(state, OctConfig{200, 32}, 1e-3);
}

void BM_BruteQuery(benchmark::State& state) {
    const auto points = uniform_points(static_cast<std::size_t>(state.range(0)), 4);
    const BruteForcePoints store(points);
    const auto queries = cube_queries(16, 1e-3, 5);
    std::vector<RecordId> out;
    std::size_t qi = 0;
    for (auto _ : state) {
        store.query_box(queries[qi++ % queries.size()], out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK(BM_KdBuild)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StrBuild)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OctBuild)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KdQueryXSmall)->Arg(1000000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_KdQueryLarge)->Arg(1000000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_StrQueryXSmall)->Arg(1000000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_StrQueryLarge)->Arg(1000000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_OctQueryBoxAdapter)->Arg(1000000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BruteQuery)->Arg(1000000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
