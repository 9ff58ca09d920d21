#include "rangebench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "rangebench/brute_force.hpp"

namespace rangebench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::atomic<std::uint64_t> g_sink{0};

constexpr std::array<std::string_view, 4> kClassMetricNames{
    "xsmall_queries_per_sec", "small_queries_per_sec", "medium_queries_per_sec",
    "large_queries_per_sec"};

double mean_of(std::span<const double> values) {
    double total = 0.0;
    for (double v : values) total += v;
    return values.empty() ? 0.0 : total / static_cast<double>(values.size());
}

}  // namespace

std::string_view tag(ThroughputClass c) {
    switch (c) {
        case ThroughputClass::Fast: return "fast";
        case ThroughputClass::Moderate: return "moderate";
        case ThroughputClass::Slow: return "slow";
    }
    return "?";
}

std::string_view tag(MemoryClass c) {
    switch (c) {
        case MemoryClass::Low: return "low";
        case MemoryClass::Moderate: return "moderate";
        case MemoryClass::High: return "high";
    }
    return "?";
}

std::string_view tag(ScalingClass c) {
    switch (c) {
        case ScalingClass::Good: return "good";
        case ScalingClass::Moderate: return "moderate";
        case ScalingClass::Poor: return "poor";
    }
    return "?";
}

std::vector<ThroughputClass> classify_throughput(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("classify_throughput: no values");
    const double best = *std::max_element(values.begin(), values.end());
    std::vector<ThroughputClass> classes;
    classes.reserve(values.size());
    for (const double v : values) {
        if (v * 10.0 >= best) {
            classes.push_back(ThroughputClass::Fast);
        } else if (v * 100.0 >= best) {
            classes.push_back(ThroughputClass::Moderate);
        } else {
            classes.push_back(ThroughputClass::Slow);
        }
    }
    return classes;
}

MemoryClass classify_memory(std::size_t mem_bytes, std::size_t raw_bytes) {
    if (raw_bytes == 0) throw std::invalid_argument("classify_memory: raw_bytes must be > 0");
    const double ratio = static_cast<double>(mem_bytes) / static_cast<double>(raw_bytes);
    if (ratio <= 2.0) return MemoryClass::Low;
    if (ratio < 5.0) return MemoryClass::Moderate;
    return MemoryClass::High;
}

namespace {

ScalingClass rate_strong_throughput(double factor, double threshold) {
    if (factor >= threshold) return ScalingClass::Good;
    if (factor >= 0.5 * threshold) return ScalingClass::Moderate;
    return ScalingClass::Poor;
}

ScalingClass rate_strong_memory(double factor, double g) {
    if (factor < g) return ScalingClass::Good;  // exactly linear growth is Moderate
    if (factor <= 1.5 * g) return ScalingClass::Moderate;
    return ScalingClass::Poor;
}

ScalingClass rate_weak(double time_increase) {
    if (time_increase <= 0.10) return ScalingClass::Good;
    if (time_increase <= 0.25) return ScalingClass::Moderate;
    return ScalingClass::Poor;
}

}  // namespace

ScalingReport strong_scaling(const MetricSet& small_side, const MetricSet& large_side,
                             double g) {
    if (!(g > 1.0)) throw std::invalid_argument("strong_scaling: growth factor must be > 1");
    ScalingReport report;
    report.mode = ScalingMode::Strong;
    report.growth_factor = g;
    report.good_threshold = 1.0 / std::log2(g);

    const auto add_throughput = [&](std::string_view metric, double small_v, double large_v) {
        const double f = large_v / small_v;
        report.entries.push_back(
            {std::string(metric), f, rate_strong_throughput(f, report.good_threshold)});
    };
    add_throughput("insertions_per_sec", small_side.insertions, large_side.insertions);
    for (int c = 0; c < 4; ++c) {
        add_throughput(kClassMetricNames[c], small_side.queries[c], large_side.queries[c]);
    }
    const auto add_memory = [&](std::string_view metric, double small_v, double large_v) {
        const double h = large_v / small_v;
        report.entries.push_back({std::string(metric), h, rate_strong_memory(h, g)});
    };
    add_memory("mem_bytes", small_side.mem_bytes, large_side.mem_bytes);
    add_memory("peak_mem_bytes", small_side.peak_mem_bytes, large_side.peak_mem_bytes);
    return report;
}

ScalingReport weak_scaling(const MetricSet& baseline, const MetricSet& scaled) {
    ScalingReport report;
    report.mode = ScalingMode::Weak;
    // Throughputs are per-operation rates, so the time change per operation is
    // baseline_rate / scaled_rate - 1 regardless of query counts.
    const auto add = [&](std::string_view metric, double baseline_v, double scaled_v) {
        const double change = baseline_v / scaled_v - 1.0;
        report.entries.push_back({std::string(metric), change, rate_weak(change)});
    };
    add("insertions_per_sec", baseline.insertions, scaled.insertions);
    for (int c = 0; c < 4; ++c) add(kClassMetricNames[c], baseline.queries[c], scaled.queries[c]);
    return report;
}

namespace {

MetricSet to_metric_set(const EngineResult& r) {
    MetricSet m;
    m.insertions = r.insertions_per_sec;
    m.queries = r.queries_per_sec;
    m.mem_bytes = static_cast<double>(r.mem_bytes);
    m.peak_mem_bytes = static_cast<double>(r.peak_mem_bytes);
    return m;
}

}  // namespace

ScalingReport strong_scaling(const EngineResult& small_side, const EngineResult& large_side,
                             double g) {
    if (small_side.engine != large_side.engine || small_side.config != large_side.config) {
        throw std::invalid_argument("strong_scaling: engine configurations do not match");
    }
    return strong_scaling(to_metric_set(small_side), to_metric_set(large_side), g);
}

ScalingReport weak_scaling(const EngineResult& baseline, const EngineResult& scaled) {
    if (baseline.engine != scaled.engine || baseline.config != scaled.config) {
        throw std::invalid_argument("weak_scaling: engine configurations do not match");
    }
    return weak_scaling(to_metric_set(baseline), to_metric_set(scaled));
}

template <typename RecordT>
EngineResult measure_engine(const EngineConfig& cfg, std::span<const RecordT> records,
                            const QueryWorkload& workload) {
    EngineResult result;
    result.record_count = records.size();

    std::vector<RecordId> out;
    std::uint64_t sink = 0;
    for (int run = 0; run < kMeasureRuns; ++run) {
        const auto build_start = Clock::now();
        const std::unique_ptr<SpatialIndex> index = make_index(cfg, records);
        const double build_s = seconds_since(build_start);
        result.insert_runs[run] =
            build_s > 0.0 ? static_cast<double>(records.size()) / build_s : 0.0;

        for (int c = 0; c < 4; ++c) {
            const std::vector<Aabb>& queries = workload.classes[c].queries;
            const auto query_start = Clock::now();
            for (const Aabb& q : queries) {
                index->query_box(q, out);
                for (const RecordId id : out) sink += id;
            }
            const double query_s = seconds_since(query_start);
            result.query_runs[c][run] =
                query_s > 0.0 ? static_cast<double>(queries.size()) / query_s : 0.0;
        }

        if (run == 0) {
            result.engine = index->kind_name();
            result.config = index->config_label();
            // Engines answering box queries through the sphere-encompass
            // filter carry the tag so the adaptation cost is visible in
            // reports.
            if (index->box_query_is_adapter()) result.config += ";adapter";
            result.mem_bytes = index->memory_bytes();
            result.peak_mem_bytes = index->peak_memory_bytes();
        } else if (result.mem_bytes != index->memory_bytes() ||
                   result.peak_mem_bytes != index->peak_memory_bytes()) {
            throw std::logic_error("measure_engine: memory accounting not deterministic");
        }
    }
    g_sink.fetch_add(sink, std::memory_order_relaxed);

    result.insertions_per_sec = mean_of(result.insert_runs);
    for (int c = 0; c < 4; ++c) result.queries_per_sec[c] = mean_of(result.query_runs[c]);
    return result;
}

template EngineResult measure_engine<PointRecord>(const EngineConfig&,
                                                  std::span<const PointRecord>,
                                                  const QueryWorkload&);
template EngineResult measure_engine<BoxRecord>(const EngineConfig&, std::span<const BoxRecord>,
                                                const QueryWorkload&);

namespace {

template <typename RecordT>
WorkerReport run_worker(int worker_id, std::span<const RecordT> records,
                        const MatrixConfig& cfg) {
    WorkerReport report;
    report.worker_id = worker_id;
    report.n_records = records.size();

    // Built up front: a record-kind/engine mismatch must surface before the
    // calibration work starts. These instances also serve the verification
    // pass below.
    std::vector<std::unique_ptr<SpatialIndex>> engines;
    engines.reserve(cfg.engines.size());
    for (const EngineConfig& ecfg : cfg.engines) engines.push_back(make_index(ecfg, records));

    const BruteForce<RecordT> oracle(records);
    const std::uint64_t worker_seed = cfg.seed ^ static_cast<std::uint64_t>(worker_id);
    const QueryWorkload workload = calibrate_workload(oracle, cfg.mode, worker_seed);
    for (int c = 0; c < 4; ++c) {
        report.achieved_selectivity[c] = workload.classes[c].achieved_selectivity;
        report.sides[c] = workload.classes[c].side;
    }

    // Verification pass, untimed. Reduced mode verifies every query; Full
    // mode audits a deterministic 1% sample unless check forces everything.
    const bool full_check = cfg.check || cfg.mode == CountMode::Reduced;
    {
        std::vector<RecordId> expected;
        std::vector<RecordId> got;
        for (int c = 0; c < 4; ++c) {
            const std::vector<Aabb>& queries = workload.classes[c].queries;
            for (std::size_t qi = 0; qi < queries.size(); ++qi) {
                if (!full_check && qi % 100 != 0) continue;
                oracle.query_box(queries[qi], expected);
                std::sort(expected.begin(), expected.end());
                if (full_check) {
                    for (const RecordId id : expected) report.ids_checksum += id;
                }
                for (const auto& engine : engines) {
                    engine->query_box(queries[qi], got);
                    std::sort(got.begin(), got.end());
                    if (got != expected) {
                        throw std::runtime_error(
                            "oracle mismatch: engine " + std::string(engine->kind_name()) + "[" +
                            engine->config_label() + "], class " +
                            std::string(kQueryClasses[c].name) + ", query " +
                            std::to_string(qi) + " (" + std::to_string(got.size()) + " vs " +
                            std::to_string(expected.size()) + " oracle ids)");
                    }
                }
            }
        }
    }
    report.fully_checked = full_check;
    engines.clear();  // measurement rebuilds from scratch

    report.engines.reserve(cfg.engines.size());
    for (const EngineConfig& ecfg : cfg.engines) {
        report.engines.push_back(measure_engine(ecfg, records, workload));
    }
    return report;
}

template <typename RecordT>
std::size_t worker_payload_bytes(std::size_t n) {
    return n * kRecordPayloadBytes<RecordT>;
}

BenchReport aggregate(std::vector<WorkerReport> workers, const MatrixConfig& cfg,
                      std::size_t raw_bytes_per_worker) {
    BenchReport report;
    report.kind = cfg.kind;
    report.mode = cfg.mode;
    report.seed = cfg.seed;
    report.workers = static_cast<int>(workers.size());
    report.raw_bytes_per_worker = raw_bytes_per_worker;

    report.fully_checked = !workers.empty();
    double n_total = 0.0;
    for (const WorkerReport& w : workers) {
        n_total += static_cast<double>(w.n_records);
        report.fully_checked = report.fully_checked && w.fully_checked;
        for (int c = 0; c < 4; ++c) {
            report.achieved_selectivity[c] +=
                w.achieved_selectivity[c] / static_cast<double>(workers.size());
        }
    }
    report.records_per_worker_mean = n_total / static_cast<double>(workers.size());
    if (report.fully_checked) {
        for (const WorkerReport& w : workers) report.ids_checksum += w.ids_checksum;
    }

    const std::size_t n_engines = cfg.engines.size();
    const auto aggregate_metric = [&](auto metric_of) {
        AggregateMetric m;
        m.mean = 0.0;
        m.min = metric_of(workers.front());
        m.max = m.min;
        for (const WorkerReport& w : workers) {
            const double v = metric_of(w);
            m.mean += v / static_cast<double>(workers.size());
            m.min = std::min(m.min, v);
            m.max = std::max(m.max, v);
        }
        return m;
    };

    for (std::size_t e = 0; e < n_engines; ++e) {
        EngineAggregate agg;
        agg.engine = workers.front().engines[e].engine;
        agg.config = workers.front().engines[e].config;
        agg.insertions = aggregate_metric(
            [&](const WorkerReport& w) { return w.engines[e].insertions_per_sec; });
        for (int c = 0; c < 4; ++c) {
            agg.queries[c] = aggregate_metric(
                [&](const WorkerReport& w) { return w.engines[e].queries_per_sec[c]; });
        }
        agg.mem_bytes = aggregate_metric(
            [&](const WorkerReport& w) { return static_cast<double>(w.engines[e].mem_bytes); });
        agg.peak_mem_bytes = aggregate_metric([&](const WorkerReport& w) {
            return static_cast<double>(w.engines[e].peak_mem_bytes);
        });
        agg.mem_class = classify_memory(static_cast<std::size_t>(agg.mem_bytes.mean),
                                        raw_bytes_per_worker);
        agg.peak_class = classify_memory(static_cast<std::size_t>(agg.peak_mem_bytes.mean),
                                         raw_bytes_per_worker);
        report.engines.push_back(std::move(agg));
    }

    // Relative throughput classes are assigned across the engines of this run.
    std::vector<double> values(n_engines);
    for (std::size_t e = 0; e < n_engines; ++e) values[e] = report.engines[e].insertions.mean;
    std::vector<ThroughputClass> classes = classify_throughput(values);
    for (std::size_t e = 0; e < n_engines; ++e) report.engines[e].insert_class = classes[e];
    for (int c = 0; c < 4; ++c) {
        for (std::size_t e = 0; e < n_engines; ++e) values[e] = report.engines[e].queries[c].mean;
        classes = classify_throughput(values);
        for (std::size_t e = 0; e < n_engines; ++e) report.engines[e].query_class[c] = classes[e];
    }

    report.worker_reports = std::move(workers);
    return report;
}

}  // namespace

BenchReport run_matrix(const std::vector<WorkerSubset>& subsets, const MatrixConfig& cfg) {
    if (subsets.empty()) throw std::invalid_argument("run_matrix: no worker subsets");
    if (cfg.engines.empty()) throw std::invalid_argument("run_matrix: no engines configured");

    const int workers = static_cast<int>(subsets.size());
    std::vector<WorkerReport> reports(static_cast<std::size_t>(workers));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));

    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                if (cfg.kind == RecordKind::Points) {
                    reports[w] = run_worker<PointRecord>(w, subsets[w].points, cfg);
                } else {
                    reports[w] = run_worker<BoxRecord>(w, subsets[w].elements, cfg);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (std::thread& t : threads) t.join();
    for (int w = 0; w < workers; ++w) {
        if (errors[w]) {
            try {
                std::rethrow_exception(errors[w]);
            } catch (const std::exception& e) {
                throw std::runtime_error("worker " + std::to_string(w) + ": " + e.what());
            }
        }
    }

    double payload_mean = 0.0;
    for (const WorkerSubset& s : subsets) {
        const std::size_t n =
            cfg.kind == RecordKind::Points ? s.points.size() : s.elements.size();
        payload_mean += static_cast<double>(cfg.kind == RecordKind::Points
                                                ? worker_payload_bytes<PointRecord>(n)
                                                : worker_payload_bytes<BoxRecord>(n)) /
                        static_cast<double>(subsets.size());
    }
    return aggregate(std::move(reports), cfg, static_cast<std::size_t>(payload_mean));
}

BenchReport run_matrix(const Mesh& mesh, const MatrixConfig& cfg) {
    return run_matrix(decompose(mesh, cfg.workers), cfg);
}

}  // namespace rangebench
