#include "rangebench/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rangebench {

namespace {

constexpr std::array<std::string_view, 4> kClassMetricNames{
    "xsmall_queries_per_sec", "small_queries_per_sec", "medium_queries_per_sec",
    "large_queries_per_sec"};

constexpr std::array<std::string_view, 4> kClassColumnNames{"xsmall q/s", "small q/s",
                                                            "medium q/s", "large q/s"};

std::string format_cell(double value, std::string_view cls) {
    return format_rate(value) + " [" + std::string(cls) + "]";
}

std::string format_mb(double bytes) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4g", bytes / 1e6);
    return buffer;
}

void append_row(std::string& out, std::span<const std::string> cells,
                std::span<const std::size_t> widths) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out += cells[i];
        if (i + 1 < cells.size()) {
            out.append(widths[i] > cells[i].size() ? widths[i] - cells[i].size() + 2 : 2, ' ');
        }
    }
    out += '\n';
}

std::string render_grid(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows) append_row(out, row, widths);
    return out;
}

}  // namespace

std::string format_rate(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

std::string format_bytes(std::size_t bytes) { return std::to_string(bytes); }

std::vector<CsvRow> bench_csv_rows(const BenchReport& report) {
    std::vector<CsvRow> rows;
    rows.reserve(report.engines.size() * 7 + 1);
    for (const EngineAggregate& e : report.engines) {
        rows.push_back({e.engine, e.config, "insertions_per_sec",
                        format_rate(e.insertions.mean), std::string(tag(e.insert_class))});
        for (int c = 0; c < 4; ++c) {
            rows.push_back({e.engine, e.config, std::string(kClassMetricNames[c]),
                            format_rate(e.queries[c].mean), std::string(tag(e.query_class[c]))});
        }
        rows.push_back({e.engine, e.config, "mem_bytes",
                        format_bytes(static_cast<std::size_t>(e.mem_bytes.mean)),
                        std::string(tag(e.mem_class))});
        rows.push_back({e.engine, e.config, "peak_mem_bytes",
                        format_bytes(static_cast<std::size_t>(e.peak_mem_bytes.mean)),
                        std::string(tag(e.peak_class))});
    }
    if (report.fully_checked) {
        rows.push_back({"oracle", "-", "query_ids_checksum",
                        std::to_string(report.ids_checksum), "-"});
    }
    return rows;
}

void write_csv(const std::filesystem::path& path, std::span<const CsvRow> rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "engine,config,metric,value,class\n";
    for (const CsvRow& row : rows) {
        out << row.engine << ',' << row.config << ',' << row.metric << ',' << row.value << ','
            << row.cls << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<CsvRow> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "engine,config,metric,value,class") {
        throw std::runtime_error("unexpected CSV header in " + path.string());
    }
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<std::string, 5> fields;
        std::size_t start = 0;
        for (int f = 0; f < 5; ++f) {
            const std::size_t comma = line.find(',', start);
            if (f < 4 && comma == std::string::npos) {
                throw std::runtime_error("malformed CSV row in " + path.string() + ": " + line);
            }
            fields[f] = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                      : comma - start);
            start = comma + 1;
        }
        rows.push_back({fields[0], fields[1], fields[2], fields[3], fields[4]});
    }
    return rows;
}

std::string render_bench_table(const BenchReport& report) {
    std::ostringstream head;
    head << "# records: " << (report.kind == RecordKind::Points ? "points" : "elements")
         << ", counts: " << (report.mode == CountMode::Full ? "full" : "reduced")
         << ", workers: " << report.workers << ", seed: " << report.seed
         << (report.fully_checked ? ", oracle-verified" : ", sample-audited") << "\n";
    head << "# records/worker mean: " << format_rate(report.records_per_worker_mean)
         << ", raw bytes/worker: " << report.raw_bytes_per_worker << " ("
         << format_mb(static_cast<double>(report.raw_bytes_per_worker)) << " MB)\n";
    head << "# achieved selectivity:";
    for (int c = 0; c < 4; ++c) {
        head << ' ' << kQueryClasses[c].name << ' '
             << format_rate(report.achieved_selectivity[c]);
    }
    head << "\n";
    if (report.fully_checked) {
        head << "# query ids checksum: " << report.ids_checksum << "\n";
    }
    head << "\n";

    std::vector<std::vector<std::string>> grid;
    grid.push_back({"engine", "config", "insert/s", std::string(kClassColumnNames[0]),
                    std::string(kClassColumnNames[1]), std::string(kClassColumnNames[2]),
                    std::string(kClassColumnNames[3]), "mem MB", "peak MB"});
    for (const EngineAggregate& e : report.engines) {
        std::vector<std::string> row{e.engine, e.config,
                                     format_cell(e.insertions.mean, tag(e.insert_class))};
        for (int c = 0; c < 4; ++c) {
            row.push_back(format_cell(e.queries[c].mean, tag(e.query_class[c])));
        }
        row.push_back(format_mb(e.mem_bytes.mean) + " [" + std::string(tag(e.mem_class)) + "]");
        row.push_back(format_mb(e.peak_mem_bytes.mean) + " [" + std::string(tag(e.peak_class)) +
                      "]");
        grid.push_back(std::move(row));
    }
    std::string out = head.str() + render_grid(grid);

    if (report.workers > 1) {
        out += "\n# per-worker spread (min..max)\n";
        std::vector<std::vector<std::string>> spread;
        spread.push_back({"engine", "config", "metric", "min", "max"});
        for (const EngineAggregate& e : report.engines) {
            spread.push_back({e.engine, e.config, "insertions_per_sec",
                              format_rate(e.insertions.min), format_rate(e.insertions.max)});
            for (int c = 0; c < 4; ++c) {
                spread.push_back({e.engine, e.config, std::string(kClassMetricNames[c]),
                                  format_rate(e.queries[c].min), format_rate(e.queries[c].max)});
            }
        }
        out += render_grid(spread);
    }
    return out;
}

std::vector<CsvRow> scaling_csv_rows(std::span<const ScalingRow> rows) {
    std::vector<CsvRow> out;
    for (const ScalingRow& row : rows) {
        for (const ScalingEntry& entry : row.report.entries) {
            out.push_back({row.engine, row.config, entry.metric, format_rate(entry.value),
                           std::string(tag(entry.rating))});
        }
    }
    return out;
}

std::string render_scaling_table(std::span<const ScalingRow> rows) {
    if (rows.empty()) return "(no matching engine configurations)\n";
    std::ostringstream head;
    const ScalingReport& first = rows.front().report;
    if (first.mode == ScalingMode::Strong) {
        head << "# strong scaling: growth factor g = " << format_rate(first.growth_factor)
             << ", good throughput threshold 1/log2(g) = " << format_rate(first.good_threshold)
             << "\n# cells: throughput factor large/small; memory factor large/small\n\n";
    } else {
        head << "# weak scaling: per-operation time change versus baseline"
             << "\n# cells: positive = slower than baseline\n\n";
    }

    std::vector<std::vector<std::string>> grid;
    grid.push_back({"engine", "config"});
    for (const ScalingEntry& entry : first.entries) grid.front().push_back(entry.metric);
    for (const ScalingRow& row : rows) {
        std::vector<std::string> cells{row.engine, row.config};
        for (const ScalingEntry& entry : row.report.entries) {
            if (row.report.mode == ScalingMode::Weak) {
                char buffer[40];
                std::snprintf(buffer, sizeof(buffer), "%+.1f%%", entry.value * 100.0);
                cells.push_back(std::string(buffer) + " [" + std::string(tag(entry.rating)) +
                                "]");
            } else {
                cells.push_back(format_cell(entry.value, tag(entry.rating)));
            }
        }
        grid.push_back(std::move(cells));
    }
    return head.str() + render_grid(grid);
}

}  // namespace rangebench
