#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rangebench/report.hpp"
#include "rangebench/run_config.hpp"

// End-to-end checks driving the installed CLI binary. The path comes from the
// build system.
#ifndef RANGEBENCH_CLI_PATH
#error "RANGEBENCH_CLI_PATH must be defined"
#endif

using namespace rangebench;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("rangebench-cli-" + std::to_string(static_cast<unsigned>(std::rand())));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args, const fs::path& log) {
    const std::string command =
        std::string(RANGEBENCH_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

const std::string kTinyMesh = "--seed 11 --workers 2";

std::string tiny_config(const fs::path& dir, int n) {
    const fs::path cfg = dir / "run.cfg";
    std::ofstream out(cfg);
    out << "nx = " << n << "\nny = " << n << "\nnz = " << n << "\njitter = 0.3\n";
    return cfg.string();
}

}  // namespace

TEST_CASE("generate writes deterministic mesh files and a manifest") {
    TempDir dir;
    const std::string cfg = tiny_config(dir.path, 9);
    const fs::path out1 = dir.path / "m1";
    const fs::path out2 = dir.path / "m2";

    REQUIRE(run_cli("generate --config " + cfg + " " + kTinyMesh + " --out " + out1.string(),
                    dir.path / "log1.txt") == 0);
    REQUIRE(run_cli("generate --config " + cfg + " " + kTinyMesh + " --out " + out2.string(),
                    dir.path / "log2.txt") == 0);

    CHECK(slurp(out1 / "points.rbm") == slurp(out2 / "points.rbm"));
    CHECK(slurp(out1 / "elements.rbm") == slurp(out2 / "elements.rbm"));

    const KeyValues manifest = read_key_values(out1 / "manifest.txt");
    bool saw_points = false;
    for (const auto& [key, value] : manifest) {
        if (key == "points_total") {
            CHECK(value == "729");
            saw_points = true;
        }
        if (key == "elements_total") CHECK(value == "512");
    }
    CHECK(saw_points);
}

TEST_CASE("generate rejects a 1-node axis naming the field") {
    TempDir dir;
    const fs::path log = dir.path / "log.txt";
    std::ofstream(dir.path / "bad.cfg") << "nx = 1\n";
    const int code =
        run_cli("generate --config " + (dir.path / "bad.cfg").string() + " --out " +
                    (dir.path / "m").string(),
                log);
    CHECK(code == 2);
    CHECK(slurp(log).find("nx") != std::string::npos);
}

TEST_CASE("bench produces the CSV contract and a manifest") {
    TempDir dir;
    const std::string cfg = tiny_config(dir.path, 15);
    const fs::path out = dir.path / "bench";
    REQUIRE(run_cli("bench --config " + cfg + " " + kTinyMesh +
                        " --engines brute,kd --leaf-sizes 20 --out " + out.string(),
                    dir.path / "log.txt") == 0);

    const std::vector<CsvRow> rows = read_csv(out / "bench.csv");
    // brute has one config, kd one leaf size: 2 engine configs x 7 metrics,
    // plus the oracle checksum row (reduced mode verifies everything).
    CHECK(rows.size() == 2 * 7 + 1);
    CHECK(rows.back().metric == "query_ids_checksum");
    CHECK(fs::exists(out / "bench.txt"));

    const KeyValues manifest = read_key_values(out / "manifest.txt");
    bool saw = false;
    for (const auto& [key, value] : manifest) {
        if (key == "records_per_worker") {
            saw = true;
            CHECK(value.find(';') != std::string::npos);
        }
    }
    CHECK(saw);
}

TEST_CASE("RANGEBENCH_SEED overrides the flag seed") {
    TempDir dir;
    const std::string cfg = tiny_config(dir.path, 13);
    const fs::path out_env = dir.path / "env";
    const fs::path out_flag = dir.path / "flag";

    REQUIRE(run_cli("bench --config " + cfg +
                        " --seed 5 --workers 1 --engines kd --leaf-sizes 20 --out " +
                        out_flag.string(),
                    dir.path / "log1.txt") == 0);
    setenv("RANGEBENCH_SEED", "5", 1);
    const int code = run_cli("bench --config " + cfg +
                                 " --seed 9 --workers 1 --engines kd --leaf-sizes 20 --out " +
                                 out_env.string(),
                             dir.path / "log2.txt");
    unsetenv("RANGEBENCH_SEED");
    REQUIRE(code == 0);

    const auto checksum = [](const fs::path& dir_path) {
        for (const CsvRow& row : read_csv(dir_path / "bench.csv")) {
            if (row.metric == "query_ids_checksum") return row.value;
        }
        return std::string();
    };
    CHECK(checksum(out_env) == checksum(out_flag));
}

TEST_CASE("scaling compares two bench directories") {
    TempDir dir;
    const fs::path small_out = dir.path / "small";
    const fs::path large_out = dir.path / "large";
    REQUIRE(run_cli("bench --config " + tiny_config(dir.path, 11) +
                        " --seed 3 --workers 1 --engines brute,kd --leaf-sizes 20 --out " +
                        small_out.string(),
                    dir.path / "log1.txt") == 0);
    REQUIRE(run_cli("bench --config " + tiny_config(dir.path, 23) +
                        " --seed 3 --workers 1 --engines brute,kd --leaf-sizes 20 --out " +
                        large_out.string(),
                    dir.path / "log2.txt") == 0);

    const fs::path scaling_out = dir.path / "scaling";
    REQUIRE(run_cli("scaling " + small_out.string() + " " + large_out.string() + " --out " +
                        scaling_out.string(),
                    dir.path / "log3.txt") == 0);
    const std::vector<CsvRow> rows = read_csv(scaling_out / "scaling.csv");
    CHECK(rows.size() == 2 * 7);  // 7 scaling entries per engine config
    const std::string table = slurp(dir.path / "log3.txt");
    CHECK(table.find("growth factor") != std::string::npos);

    // Same directory twice: g = 1 must be rejected.
    CHECK(run_cli("scaling " + small_out.string() + " " + small_out.string(),
                  dir.path / "log4.txt") == 1);
    CHECK(slurp(dir.path / "log4.txt").find("growth") != std::string::npos);

    // Weak mode on matching scales works and reports percent changes.
    REQUIRE(run_cli("scaling " + small_out.string() + " " + small_out.string() +
                        " --mode weak",
                    dir.path / "log5.txt") == 0);
    CHECK(slurp(dir.path / "log5.txt").find("weak scaling") != std::string::npos);
}

TEST_CASE("report re-renders a bench directory") {
    TempDir dir;
    const fs::path out = dir.path / "bench";
    REQUIRE(run_cli("bench --config " + tiny_config(dir.path, 11) +
                        " --seed 4 --workers 1 --engines brute --out " + out.string(),
                    dir.path / "log1.txt") == 0);
    REQUIRE(run_cli("report " + out.string(), dir.path / "log2.txt") == 0);
    const std::string text = slurp(dir.path / "log2.txt");
    CHECK(text.find("insertions_per_sec") != std::string::npos);
    CHECK(text.find("brute") != std::string::npos);
}

TEST_CASE("calibrate exports per-class workloads") {
    TempDir dir;
    const fs::path out = dir.path / "cal";
    REQUIRE(run_cli("calibrate --config " + tiny_config(dir.path, 15) +
                        " --seed 6 --out " + out.string(),
                    dir.path / "log.txt") == 0);
    for (const char* name : {"xsmall", "small", "medium", "large"}) {
        CHECK(fs::exists(out / (std::string("workload_") + name + ".rbm")));
    }
    const std::string text = slurp(dir.path / "log.txt");
    CHECK(text.find("achieved") != std::string::npos);
}

TEST_CASE("unknown config keys fail with exit code 2") {
    TempDir dir;
    std::ofstream(dir.path / "bad.cfg") << "workres = 4\n";
    const int code = run_cli("bench --config " + (dir.path / "bad.cfg").string(),
                             dir.path / "log.txt");
    CHECK(code == 2);
    CHECK(slurp(dir.path / "log.txt").find("workres") != std::string::npos);
}
