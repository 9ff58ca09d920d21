#include "rangebench/engine.hpp"

#include <stdexcept>

#include "rangebench/brute_force.hpp"
#include "rangebench/kd_tree.hpp"
#include "rangebench/octree.hpp"
#include "rangebench/str_tree.hpp"

namespace rangebench {

std::string_view engine_kind_name(EngineKind kind) {
    switch (kind) {
        case EngineKind::BruteForce: return "brute";
        case EngineKind::KdTree: return "kd";
        case EngineKind::RTree: return "rtree";
        case EngineKind::Octree: return "octree";
    }
    return "?";
}

EngineKind parse_engine_kind(std::string_view name) {
    if (name == "brute") return EngineKind::BruteForce;
    if (name == "kd") return EngineKind::KdTree;
    if (name == "rtree") return EngineKind::RTree;
    if (name == "octree") return EngineKind::Octree;
    throw std::invalid_argument("unknown engine '" + std::string(name) +
                                "' (expected brute, kd, rtree or octree)");
}

std::unique_ptr<SpatialIndex> make_index(const EngineConfig& cfg,
                                         std::span<const PointRecord> records) {
    switch (cfg.kind) {
        case EngineKind::BruteForce:
            return std::make_unique<BruteForcePoints>(records);
        case EngineKind::KdTree:
            return std::make_unique<KdTree>(records, KdConfig{cfg.leaf_size});
        case EngineKind::RTree:
            return std::make_unique<StrTreePoints>(records,
                                                   RTreeConfig{cfg.leaf_size, cfg.min_fanout});
        case EngineKind::Octree:
            return std::make_unique<Octree>(records, OctConfig{cfg.leaf_size, cfg.max_depth});
    }
    throw std::invalid_argument("make_index: bad engine kind");
}

std::unique_ptr<SpatialIndex> make_index(const EngineConfig& cfg,
                                         std::span<const BoxRecord> records) {
    switch (cfg.kind) {
        case EngineKind::BruteForce:
            return std::make_unique<BruteForceBoxes>(records);
        case EngineKind::RTree:
            return std::make_unique<StrTreeBoxes>(records,
                                                  RTreeConfig{cfg.leaf_size, cfg.min_fanout});
        case EngineKind::KdTree:
        case EngineKind::Octree:
            throw std::invalid_argument(std::string(engine_kind_name(cfg.kind)) +
                                        " stores point records only");
    }
    throw std::invalid_argument("make_index: bad engine kind");
}

}  // namespace rangebench
