#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rangebench/brute_force.hpp"
#include "rangebench/harness.hpp"
#include "rangebench/mesh.hpp"
#include "rangebench/mesh_io.hpp"
#include "rangebench/report.hpp"
#include "rangebench/run_config.hpp"
#include "rangebench/workload.hpp"

namespace fs = std::filesystem;
using namespace rangebench;

namespace {

/// Flags shared by the config-driven subcommands. Precedence: config file <
/// command-line flags < RANGEBENCH_SEED (seed only).
struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> engines;
    std::optional<std::string> leaf_sizes;
    std::optional<std::string> records;
    std::optional<std::string> mode;
    bool check = false;
    std::optional<std::string> out;
};

void add_common_flags(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Config file (key = value lines)");
    cmd->add_option("--seed", opts.seed, "RNG seed (overrides config)");
    cmd->add_option("--workers", opts.workers, "Independent workers (overrides config)");
    cmd->add_option("--engines", opts.engines, "Comma list: brute,kd,rtree,octree");
    cmd->add_option("--leaf-sizes", opts.leaf_sizes, "Comma list of leaf sizes, e.g. 20,200");
    cmd->add_option("--records", opts.records, "points|elements")
        ->check(CLI::IsMember({"points", "elements"}));
    cmd->add_option("--mode", opts.mode, "full|reduced query counts")
        ->check(CLI::IsMember({"full", "reduced"}));
    cmd->add_flag("--check", opts.check, "Oracle-verify every query before timing");
    cmd->add_option("--out", opts.out, "Output directory");
}

RunConfig effective_config(const CliOptions& opts) {
    RunConfig config;
    if (!opts.config_path.empty()) config = read_run_config(opts.config_path);
    if (opts.seed) config.seed = *opts.seed;
    if (opts.workers) config.workers = *opts.workers;
    if (opts.engines) {
        config.engines.clear();
        std::string list = *opts.engines;
        std::size_t start = 0;
        while (start <= list.size()) {
            const std::size_t pos = list.find(',', start);
            const std::string part =
                list.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
            if (!part.empty()) config.engines.push_back(part);
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
    }
    if (opts.leaf_sizes) {
        config.leaf_sizes.clear();
        std::string list = *opts.leaf_sizes;
        std::size_t start = 0;
        while (start <= list.size()) {
            const std::size_t pos = list.find(',', start);
            const std::string part =
                list.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
            if (!part.empty()) config.leaf_sizes.push_back(std::stoi(part));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
    }
    if (opts.records) {
        config.records = *opts.records == "points" ? RecordKind::Points : RecordKind::Boxes;
    }
    if (opts.mode) config.mode = *opts.mode == "full" ? CountMode::Full : CountMode::Reduced;
    if (opts.check) config.check = true;
    if (opts.out) config.out_dir = *opts.out;

    if (const char* env_seed = std::getenv("RANGEBENCH_SEED")) {
        config.seed = std::stoull(env_seed);
    }
    validate(config);
    return config;
}

void write_manifest(const fs::path& path, const RunConfig& config, const KeyValues& extra) {
    KeyValues pairs = to_key_values(config);
    pairs.insert(pairs.end(), extra.begin(), extra.end());
    write_key_values(path, pairs);
}

int cmd_generate(const CliOptions& opts) {
    const RunConfig config = effective_config(opts);
    const Mesh mesh = generate_mesh(config.mesh_spec());

    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    write_point_records(out_dir / "points.rbm", mesh.points);
    write_box_records(out_dir / "elements.rbm", mesh.elements);
    write_manifest(out_dir / "manifest.txt", config,
                   {{"command", "generate"},
                    {"points_total", std::to_string(mesh.points.size())},
                    {"elements_total", std::to_string(mesh.elements.size())}});
    std::cout << "generated " << mesh.points.size() << " points, " << mesh.elements.size()
              << " elements -> " << out_dir.string() << "\n";
    return 0;
}

int cmd_calibrate(const CliOptions& opts) {
    const RunConfig config = effective_config(opts);
    const Mesh mesh = generate_mesh(config.mesh_spec());
    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);

    QueryWorkload workload;
    std::size_t n = 0;
    if (config.records == RecordKind::Points) {
        const BruteForcePoints store(mesh.points);
        n = store.size();
        workload = calibrate_workload(store, config.mode, config.seed);
    } else {
        const BruteForceBoxes store(mesh.elements);
        n = store.size();
        workload = calibrate_workload(store, config.mode, config.seed);
    }

    KeyValues summary{{"command", "calibrate"}, {"records_total", std::to_string(n)}};
    for (int c = 0; c < 4; ++c) {
        const ClassWorkload& cls = workload.classes[c];
        const std::string name(kQueryClasses[c].name);

        std::vector<BoxRecord> queries;
        queries.reserve(cls.queries.size());
        for (std::size_t i = 0; i < cls.queries.size(); ++i) {
            queries.push_back({cls.queries[i], static_cast<RecordId>(i)});
        }
        write_box_records(out_dir / ("workload_" + name + ".rbm"), queries);

        summary.emplace_back("side_" + name, format_rate(cls.side));
        summary.emplace_back("achieved_selectivity_" + name,
                             format_rate(cls.achieved_selectivity));
        summary.emplace_back("target_selectivity_" + name,
                             format_rate(kQueryClasses[c].target_selectivity));
        summary.emplace_back("queries_" + name, std::to_string(cls.queries.size()));
        std::cout << name << ": side " << format_rate(cls.side) << ", achieved "
                  << format_rate(cls.achieved_selectivity) << " (target "
                  << format_rate(kQueryClasses[c].target_selectivity) << ")\n";
    }
    write_manifest(out_dir / "calibration.txt", config, summary);
    return 0;
}

int cmd_bench(const CliOptions& opts) {
    const RunConfig config = effective_config(opts);
    const Mesh mesh = generate_mesh(config.mesh_spec());

    MatrixConfig matrix;
    matrix.engines = engine_configs(config);
    matrix.kind = config.records;
    matrix.mode = config.mode;
    matrix.check = config.check;
    matrix.seed = config.seed;
    matrix.workers = config.workers;

    const BenchReport report = run_matrix(mesh, matrix);

    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    const std::vector<CsvRow> rows = bench_csv_rows(report);
    write_csv(out_dir / "bench.csv", rows);
    const std::string table = render_bench_table(report);
    {
        std::ofstream txt(out_dir / "bench.txt", std::ios::trunc);
        txt << table;
    }

    // Full precision: the scaling command derives the growth factor g from
    // this value, and exactly-linear memory growth must compare equal to g.
    char mean_buffer[40];
    std::snprintf(mean_buffer, sizeof(mean_buffer), "%.17g", report.records_per_worker_mean);
    KeyValues extra{{"command", "bench"},
                    {"points_total", std::to_string(mesh.points.size())},
                    {"elements_total", std::to_string(mesh.elements.size())},
                    {"records_per_worker_mean", mean_buffer},
                    {"raw_bytes_per_worker", std::to_string(report.raw_bytes_per_worker)},
                    {"fully_checked", report.fully_checked ? "true" : "false"}};
    std::string per_worker;
    for (const WorkerReport& w : report.worker_reports) {
        if (!per_worker.empty()) per_worker += ';';
        per_worker += std::to_string(w.n_records);
    }
    extra.emplace_back("records_per_worker", per_worker);
    for (int c = 0; c < 4; ++c) {
        extra.emplace_back("achieved_selectivity_" + std::string(kQueryClasses[c].name),
                           format_rate(report.achieved_selectivity[c]));
    }
    if (report.fully_checked) {
        extra.emplace_back("query_ids_checksum", std::to_string(report.ids_checksum));
    }
    write_manifest(out_dir / "manifest.txt", config, extra);

    std::cout << table;
    return 0;
}

std::string manifest_value(const KeyValues& pairs, const std::string& key,
                           const fs::path& path) {
    for (const auto& [k, v] : pairs) {
        if (k == key) return v;
    }
    throw std::runtime_error("manifest " + path.string() + " is missing key '" + key + "'");
}

std::map<std::pair<std::string, std::string>, MetricSet> metrics_by_engine(
    const std::vector<CsvRow>& rows) {
    std::map<std::pair<std::string, std::string>, MetricSet> metrics;
    for (const CsvRow& row : rows) {
        if (row.engine == "oracle") continue;
        MetricSet& m = metrics[{row.engine, row.config}];
        const double value = std::stod(row.value);
        if (row.metric == "insertions_per_sec") {
            m.insertions = value;
        } else if (row.metric == "xsmall_queries_per_sec") {
            m.queries[0] = value;
        } else if (row.metric == "small_queries_per_sec") {
            m.queries[1] = value;
        } else if (row.metric == "medium_queries_per_sec") {
            m.queries[2] = value;
        } else if (row.metric == "large_queries_per_sec") {
            m.queries[3] = value;
        } else if (row.metric == "mem_bytes") {
            m.mem_bytes = value;
        } else if (row.metric == "peak_mem_bytes") {
            m.peak_mem_bytes = value;
        }
    }
    return metrics;
}

int cmd_scaling(const std::string& small_dir, const std::string& large_dir,
                const std::string& mode, const std::string& out) {
    const fs::path small_manifest = fs::path(small_dir) / "manifest.txt";
    const fs::path large_manifest = fs::path(large_dir) / "manifest.txt";
    const KeyValues small_kv = read_key_values(small_manifest);
    const KeyValues large_kv = read_key_values(large_manifest);

    const std::string small_records = manifest_value(small_kv, "records", small_manifest);
    const std::string large_records = manifest_value(large_kv, "records", large_manifest);
    if (small_records != large_records) {
        throw std::runtime_error("record kinds differ: " + small_records + " vs " +
                                 large_records);
    }

    const auto small_metrics = metrics_by_engine(read_csv(fs::path(small_dir) / "bench.csv"));
    const auto large_metrics = metrics_by_engine(read_csv(fs::path(large_dir) / "bench.csv"));

    std::vector<ScalingRow> rows;
    if (mode == "strong") {
        const double small_n = std::stod(
            manifest_value(small_kv, "records_per_worker_mean", small_manifest));
        const double large_n = std::stod(
            manifest_value(large_kv, "records_per_worker_mean", large_manifest));
        const double g = large_n / small_n;
        if (!(g > 1.0)) {
            throw std::runtime_error(
                "strong scaling needs per-worker data growth, got g = " + format_rate(g));
        }
        for (const auto& [key, small_m] : small_metrics) {
            const auto it = large_metrics.find(key);
            if (it == large_metrics.end()) continue;
            rows.push_back({key.first, key.second, strong_scaling(small_m, it->second, g)});
        }
    } else {
        for (const auto& [key, baseline_m] : small_metrics) {
            const auto it = large_metrics.find(key);
            if (it == large_metrics.end()) continue;
            rows.push_back({key.first, key.second, weak_scaling(baseline_m, it->second)});
        }
    }

    const std::string table = render_scaling_table(rows);
    std::cout << table;
    if (!out.empty()) {
        fs::create_directories(out);
        write_csv(fs::path(out) / "scaling.csv", scaling_csv_rows(rows));
        std::ofstream txt(fs::path(out) / "scaling.txt", std::ios::trunc);
        txt << table;
    }
    return 0;
}

int cmd_report(const std::string& dir) {
    const fs::path csv_path = fs::path(dir) / "bench.csv";
    const std::vector<CsvRow> rows = read_csv(csv_path);

    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::map<std::string, CsvRow>> grouped;
    for (const CsvRow& row : rows) {
        const auto key = std::make_pair(row.engine, row.config);
        if (grouped.find(key) == grouped.end()) order.push_back(key);
        grouped[key][row.metric] = row;
    }

    constexpr std::array<std::string_view, 7> metrics{
        "insertions_per_sec", "xsmall_queries_per_sec", "small_queries_per_sec",
        "medium_queries_per_sec", "large_queries_per_sec", "mem_bytes", "peak_mem_bytes"};
    std::cout << "engine  config  " ;
    for (const auto m : metrics) std::cout << m << "  ";
    std::cout << "\n";
    for (const auto& key : order) {
        if (key.first == "oracle") continue;
        std::cout << key.first << "  " << key.second << "  ";
        for (const auto m : metrics) {
            const auto it = grouped[key].find(std::string(m));
            if (it == grouped[key].end()) {
                std::cout << "-  ";
            } else {
                std::cout << it->second.value << " [" << it->second.cls << "]  ";
            }
        }
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial-index range-query benchmark harness"};
    app.require_subcommand(1);

    CliOptions generate_opts;
    CLI::App* generate = app.add_subcommand("generate", "Generate a mesh and write RBM1 files");
    add_common_flags(generate, generate_opts);

    CliOptions calibrate_opts;
    CLI::App* calibrate =
        app.add_subcommand("calibrate", "Calibrate the four query classes and export them");
    add_common_flags(calibrate, calibrate_opts);

    CliOptions bench_opts;
    CLI::App* bench = app.add_subcommand("bench", "Run the benchmark matrix and write reports");
    add_common_flags(bench, bench_opts);

    std::string scaling_small;
    std::string scaling_large;
    std::string scaling_mode = "strong";
    std::string scaling_out;
    CLI::App* scaling =
        app.add_subcommand("scaling", "Compare two bench output directories");
    scaling->add_option("small", scaling_small, "Small-scale (or baseline) bench directory")
        ->required();
    scaling->add_option("large", scaling_large, "Large-scale (or scaled) bench directory")
        ->required();
    scaling->add_option("--mode", scaling_mode, "strong|weak")
        ->check(CLI::IsMember({"strong", "weak"}));
    scaling->add_option("--out", scaling_out, "Directory for scaling.csv / scaling.txt");

    std::string report_dir;
    CLI::App* report = app.add_subcommand("report", "Re-render the table from a bench.csv");
    report->add_option("dir", report_dir, "Bench output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(generate_opts);
        if (calibrate->parsed()) return cmd_calibrate(calibrate_opts);
        if (bench->parsed()) return cmd_bench(bench_opts);
        if (scaling->parsed()) return cmd_scaling(scaling_small, scaling_large, scaling_mode,
                                                  scaling_out);
        if (report->parsed()) return cmd_report(report_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
