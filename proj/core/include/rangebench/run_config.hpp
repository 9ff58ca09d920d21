#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "rangebench/engine.hpp"
#include "rangebench/mesh.hpp"
#include "rangebench/workload.hpp"

namespace rangebench {

/// Effective configuration of one run. Serializes losslessly through the
/// line-oriented `key = value` format (one key per line, '#' comments).
struct RunConfig {
    int nx = 101;
    int ny = 101;
    int nz = 101;
    Aabb domain{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    double jitter = 0.3;
    std::uint64_t seed = 0;
    int workers = 1;
    std::vector<std::string> engines{"brute", "kd", "rtree", "octree"};
    std::vector<int> leaf_sizes{20, 200};
    RecordKind records = RecordKind::Points;
    CountMode mode = CountMode::Reduced;
    bool check = false;
    std::string out_dir = "out";

    friend bool operator==(const RunConfig&, const RunConfig&) = default;

    MeshSpec mesh_spec() const { return {nx, ny, nz, domain, jitter, seed}; }
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// `key = value` lines; '#' starts a comment, blank lines are skipped.
KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values(const std::filesystem::path& path);
void write_key_values(const std::filesystem::path& path, const KeyValues& pairs);

/// Throws std::invalid_argument naming the offending key on unknown keys or
/// unparsable values.
RunConfig parse_run_config(const KeyValues& pairs);
RunConfig read_run_config(const std::filesystem::path& path);

/// Rejects invalid field combinations with a diagnostic naming the field.
void validate(const RunConfig& config);

KeyValues to_key_values(const RunConfig& config);

/// Expands the engine list into concrete configs: brute once, tree engines
/// once per leaf size (in list order).
std::vector<EngineConfig> engine_configs(const RunConfig& config);

}  // namespace rangebench
