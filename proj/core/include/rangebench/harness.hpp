#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rangebench/engine.hpp"
#include "rangebench/mesh.hpp"
#include "rangebench/workload.hpp"

namespace rangebench {

inline constexpr int kMeasureRuns = 3;

enum class ThroughputClass { Fast, Moderate, Slow };
enum class MemoryClass { Low, Moderate, High };
enum class ScalingClass { Good, Moderate, Poor };

std::string_view tag(ThroughputClass c);
std::string_view tag(MemoryClass c);
std::string_view tag(ScalingClass c);

/// Per-engine measurement: arithmetic means over kMeasureRuns independent
/// runs, each rebuilding the engine from scratch. Memory numbers come from
/// the engine's own allocation counters and are identical across runs.
struct EngineResult {
    std::string engine;
    std::string config;
    std::size_t record_count = 0;
    double insertions_per_sec = 0.0;
    std::array<double, 4> queries_per_sec{};  // indexed by query class
    std::size_t mem_bytes = 0;
    std::size_t peak_mem_bytes = 0;
    std::array<double, kMeasureRuns> insert_runs{};
    std::array<std::array<double, kMeasureRuns>, 4> query_runs{};
};

/// Paper-style relative classification: Fast within 10x of the best value,
/// Moderate within 100x, Slow otherwise. Boundaries count as within (exactly
/// 10x below the best is still Fast). Throws on empty input.
std::vector<ThroughputClass> classify_throughput(std::span<const double> values);

/// Low at <= 2x the raw record payload, Moderate below 5x, High otherwise.
MemoryClass classify_memory(std::size_t mem_bytes, std::size_t raw_bytes);

enum class ScalingMode { Strong, Weak };

struct ScalingEntry {
    std::string metric;
    /// Strong: large value / small value. Weak: fractional time increase over
    /// the baseline (0.047 = 4.7% slower).
    double value = 0.0;
    ScalingClass rating = ScalingClass::Poor;
};

struct ScalingReport {
    ScalingMode mode = ScalingMode::Strong;
    double growth_factor = 0.0;    // strong only
    double good_threshold = 0.0;   // strong only: 1 / log2(growth_factor)
    std::vector<ScalingEntry> entries;
};

/// One engine-config's seven benchmark metrics, as read from a report.
struct MetricSet {
    double insertions = 0.0;
    std::array<double, 4> queries{};
    double mem_bytes = 0.0;
    double peak_mem_bytes = 0.0;
};

/// Strong scaling with data growth factor g > 1 (throws otherwise).
/// Throughput factors (large/small) rate Good at or above 1/log2(g) and
/// Moderate at or above half that. Memory factors rate Good strictly below g
/// (exactly linear growth is Moderate) and Moderate up to 1.5x g.
ScalingReport strong_scaling(const MetricSet& small_side, const MetricSet& large_side, double g);
ScalingReport strong_scaling(const EngineResult& small_side, const EngineResult& large_side,
                             double g);

/// Weak scaling: per-operation time change versus the baseline, per metric.
/// Good at most 10% worse, Moderate in (10%, 25%], Poor above; improvements
/// are Good. Counts are normalized away, so the scaled run may use reduced
/// query counts.
ScalingReport weak_scaling(const MetricSet& baseline, const MetricSet& scaled);
ScalingReport weak_scaling(const EngineResult& baseline, const EngineResult& scaled);

/// Times one engine over a calibrated workload: kMeasureRuns full rebuilds,
/// each followed by the four query classes run back-to-back with results
/// materialized into a sink.
template <typename RecordT>
EngineResult measure_engine(const EngineConfig& cfg, std::span<const RecordT> records,
                            const QueryWorkload& workload);

extern template EngineResult measure_engine<PointRecord>(const EngineConfig&,
                                                         std::span<const PointRecord>,
                                                         const QueryWorkload&);
extern template EngineResult measure_engine<BoxRecord>(const EngineConfig&,
                                                       std::span<const BoxRecord>,
                                                       const QueryWorkload&);

struct MatrixConfig {
    std::vector<EngineConfig> engines;
    RecordKind kind = RecordKind::Points;
    CountMode mode = CountMode::Reduced;
    /// Force oracle verification of every query even in Full mode. Reduced
    /// mode always verifies everything; Full mode without the flag audits a
    /// deterministic 1% sample.
    bool check = false;
    std::uint64_t seed = 0;
    int workers = 1;
};

struct WorkerReport {
    int worker_id = 0;
    std::size_t n_records = 0;
    std::array<double, 4> achieved_selectivity{};
    std::array<double, 4> sides{};
    std::vector<EngineResult> engines;
    /// Sum of all oracle result ids over the workload; set when every query
    /// was verified.
    std::uint64_t ids_checksum = 0;
    bool fully_checked = false;
};

struct AggregateMetric {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct EngineAggregate {
    std::string engine;
    std::string config;
    AggregateMetric insertions;
    std::array<AggregateMetric, 4> queries;
    AggregateMetric mem_bytes;
    AggregateMetric peak_mem_bytes;
    ThroughputClass insert_class = ThroughputClass::Slow;
    std::array<ThroughputClass, 4> query_class{};
    MemoryClass mem_class = MemoryClass::High;
    MemoryClass peak_class = MemoryClass::High;
};

struct BenchReport {
    RecordKind kind = RecordKind::Points;
    CountMode mode = CountMode::Reduced;
    bool fully_checked = false;
    std::uint64_t seed = 0;
    int workers = 0;
    double records_per_worker_mean = 0.0;
    std::size_t raw_bytes_per_worker = 0;  // mean record payload per worker
    std::array<double, 4> achieved_selectivity{};  // mean across workers
    std::uint64_t ids_checksum = 0;                // summed when fully checked
    std::vector<WorkerReport> worker_reports;
    std::vector<EngineAggregate> engines;
};

/// Runs every engine on every worker subset concurrently; workers share no
/// mutable state and are joined before aggregation. Any worker failure aborts
/// with the worker id and cause. Worker workloads are calibrated from
/// seed ^ worker_id.
BenchReport run_matrix(const std::vector<WorkerSubset>& subsets, const MatrixConfig& cfg);

/// Decomposes the mesh across cfg.workers and delegates to the overload
/// above.
BenchReport run_matrix(const Mesh& mesh, const MatrixConfig& cfg);

}  // namespace rangebench
