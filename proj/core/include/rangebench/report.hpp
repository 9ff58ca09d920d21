#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rangebench/harness.hpp"

namespace rangebench {

/// One line of the machine-readable report. Fields never contain commas.
struct CsvRow {
    std::string engine;
    std::string config;
    std::string metric;
    std::string value;
    std::string cls;
};

/// Benchmark rows: per engine-config, insertions_per_sec, the four per-class
/// query rates, mem_bytes and peak_mem_bytes (7 rows), each tagged with its
/// class. When the run was fully verified, one trailing row
/// (oracle,-,query_ids_checksum,<sum>,-) records the deterministic oracle
/// checksum.
std::vector<CsvRow> bench_csv_rows(const BenchReport& report);

void write_csv(const std::filesystem::path& path, std::span<const CsvRow> rows);
std::vector<CsvRow> read_csv(const std::filesystem::path& path);

/// Paper-style table: one row per engine-config, "value [tag]" cells, plus a
/// per-worker min..max spread section when the run used several workers.
std::string render_bench_table(const BenchReport& report);

struct ScalingRow {
    std::string engine;
    std::string config;
    ScalingReport report;
};

std::vector<CsvRow> scaling_csv_rows(std::span<const ScalingRow> rows);
std::string render_scaling_table(std::span<const ScalingRow> rows);

/// Shorthand numeric formats shared by reports: %.6g for rates and factors,
/// plain decimal for byte counts.
std::string format_rate(double value);
std::string format_bytes(std::size_t bytes);

}  // namespace rangebench
