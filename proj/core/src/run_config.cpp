#include "rangebench/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rangebench {

namespace {

std::string trim(const std::string& s) {
    const std::size_t first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const std::size_t last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t pos = s.find(sep, start);
        const std::string part =
            trim(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (!part.empty()) parts.push_back(part);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw std::invalid_argument("config key '" + key + "': cannot parse value '" + value + "'");
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) bad_value(key, value);
        return v;
    } catch (const std::invalid_argument&) {
        bad_value(key, value);
    } catch (const std::out_of_range&) {
        bad_value(key, value);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) bad_value(key, value);
        return v;
    } catch (const std::invalid_argument&) {
        bad_value(key, value);
    } catch (const std::out_of_range&) {
        bad_value(key, value);
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) bad_value(key, value);
        return v;
    } catch (const std::invalid_argument&) {
        bad_value(key, value);
    } catch (const std::out_of_range&) {
        bad_value(key, value);
    }
}

Point3 parse_point(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    Point3 p;
    if (!(in >> p.x >> p.y >> p.z)) bad_value(key, value);
    std::string rest;
    if (in >> rest) bad_value(key, value);
    return p;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    bad_value(key, value);
}

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string format_point(const Point3& p) {
    return format_double(p.x) + " " + format_double(p.y) + " " + format_double(p.z);
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
    KeyValues pairs;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected 'key = value', got '" + line + "'");
        }
        pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return pairs;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_key_values(buffer.str());
}

void write_key_values(const std::filesystem::path& path, const KeyValues& pairs) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    for (const auto& [key, value] : pairs) out << key << " = " << value << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

RunConfig parse_run_config(const KeyValues& pairs) {
    RunConfig config;
    for (const auto& [key, value] : pairs) {
        if (key == "nx") {
            config.nx = parse_int(key, value);
        } else if (key == "ny") {
            config.ny = parse_int(key, value);
        } else if (key == "nz") {
            config.nz = parse_int(key, value);
        } else if (key == "domain_min") {
            config.domain.min = parse_point(key, value);
        } else if (key == "domain_max") {
            config.domain.max = parse_point(key, value);
        } else if (key == "jitter") {
            config.jitter = parse_double(key, value);
        } else if (key == "seed") {
            config.seed = parse_u64(key, value);
        } else if (key == "workers") {
            config.workers = parse_int(key, value);
        } else if (key == "engines") {
            config.engines = split(value, ',');
        } else if (key == "leaf_sizes") {
            config.leaf_sizes.clear();
            for (const std::string& part : split(value, ',')) {
                config.leaf_sizes.push_back(parse_int(key, part));
            }
        } else if (key == "records") {
            if (value == "points") {
                config.records = RecordKind::Points;
            } else if (value == "elements") {
                config.records = RecordKind::Boxes;
            } else {
                bad_value(key, value);
            }
        } else if (key == "mode") {
            if (value == "full") {
                config.mode = CountMode::Full;
            } else if (value == "reduced") {
                config.mode = CountMode::Reduced;
            } else {
                bad_value(key, value);
            }
        } else if (key == "check") {
            config.check = parse_bool(key, value);
        } else if (key == "out") {
            config.out_dir = value;
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
    return config;
}

RunConfig read_run_config(const std::filesystem::path& path) {
    return parse_run_config(read_key_values(path));
}

void validate(const RunConfig& config) {
    const auto require = [](bool ok, const std::string& message) {
        if (!ok) throw std::invalid_argument(message);
    };
    require(config.nx >= 2, "nx must be >= 2 (elements need at least one cell per axis)");
    require(config.ny >= 2, "ny must be >= 2 (elements need at least one cell per axis)");
    require(config.nz >= 2, "nz must be >= 2 (elements need at least one cell per axis)");
    require(config.jitter >= 0.0 && config.jitter < 0.5, "jitter must be in [0, 0.5)");
    require(is_valid(config.domain) && config.domain.min.x < config.domain.max.x &&
                config.domain.min.y < config.domain.max.y &&
                config.domain.min.z < config.domain.max.z,
            "domain must have positive extent on every axis");
    require(config.workers >= 1, "workers must be >= 1");
    require(!config.engines.empty(), "engines must not be empty");
    for (const std::string& name : config.engines) {
        parse_engine_kind(name);  // throws with the engine name
    }
    require(!config.leaf_sizes.empty(), "leaf_sizes must not be empty");
    for (const int leaf : config.leaf_sizes) {
        require(leaf >= 1, "leaf_sizes entries must be >= 1");
    }
    require(!config.out_dir.empty(), "out must not be empty");
}

KeyValues to_key_values(const RunConfig& config) {
    std::vector<std::string> leaf_strings;
    leaf_strings.reserve(config.leaf_sizes.size());
    for (const int leaf : config.leaf_sizes) leaf_strings.push_back(std::to_string(leaf));
    return {
        {"nx", std::to_string(config.nx)},
        {"ny", std::to_string(config.ny)},
        {"nz", std::to_string(config.nz)},
        {"domain_min", format_point(config.domain.min)},
        {"domain_max", format_point(config.domain.max)},
        {"jitter", format_double(config.jitter)},
        {"seed", std::to_string(config.seed)},
        {"workers", std::to_string(config.workers)},
        {"engines", join(config.engines, ',')},
        {"leaf_sizes", join(leaf_strings, ',')},
        {"records", config.records == RecordKind::Points ? "points" : "elements"},
        {"mode", config.mode == CountMode::Full ? "full" : "reduced"},
        {"check", config.check ? "true" : "false"},
        {"out", config.out_dir},
    };
}

std::vector<EngineConfig> engine_configs(const RunConfig& config) {
    std::vector<EngineConfig> configs;
    for (const std::string& name : config.engines) {
        const EngineKind kind = parse_engine_kind(name);
        if (kind == EngineKind::BruteForce) {
            configs.push_back({kind, 0, 0, 0});
            continue;
        }
        for (const int leaf : config.leaf_sizes) {
            EngineConfig ecfg;
            ecfg.kind = kind;
            ecfg.leaf_size = leaf;
            configs.push_back(ecfg);
        }
    }
    return configs;
}

}  // namespace rangebench
