#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rangebench/geom.hpp"

namespace rangebench {

enum class EngineKind { BruteForce, KdTree, RTree, Octree };

std::string_view engine_kind_name(EngineKind kind);

/// Parses "brute", "kd", "rtree" or "octree". Throws std::invalid_argument.
EngineKind parse_engine_kind(std::string_view name);

struct EngineConfig {
    EngineKind kind = EngineKind::BruteForce;
    /// Leaf capacity; doubles as the fanout M for the R-tree.
    int leaf_size = 200;
    /// R-tree minimum fanout m; 0 selects the default ceil(0.4 * M).
    int min_fanout = 0;
    /// Octree recursion guard.
    int max_depth = 32;

    friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

/// Optional per-query instrumentation, filled when a non-null pointer is
/// passed to query_box/query_sphere.
struct QueryStats {
    std::size_t nodes_visited = 0;
    std::size_t leaves_visited = 0;
    /// Records examined or emitted; for the octree box adapter this is the
    /// sphere-phase candidate count before box filtering.
    std::size_t candidates = 0;
};

/// Build-once, query-many contract shared by all engines. Implementations are
/// immutable after construction; concurrent queries are safe.
class SpatialIndex {
public:
    virtual ~SpatialIndex() = default;

    /// Collects the ids of all records matching the closed query box into
    /// `out` (cleared first). Results are a set: no duplicates, order
    /// unspecified.
    virtual void query_box(const Aabb& q, std::vector<RecordId>& out,
                           QueryStats* stats = nullptr) const = 0;

    virtual std::size_t size() const = 0;

    /// Live index storage after build, in bytes.
    virtual std::size_t memory_bytes() const = 0;
    /// High-water mark of index-attributable allocations during build.
    virtual std::size_t peak_memory_bytes() const = 0;

    virtual std::string_view kind_name() const = 0;
    virtual std::string config_label() const = 0;

    /// True when box queries run through the sphere-encompass-then-filter
    /// adapter rather than a native box traversal.
    virtual bool box_query_is_adapter() const { return false; }

    /// Full structural walk; throws std::logic_error describing the first
    /// violated invariant.
    virtual void check_invariants() const {}
};

/// Builds the configured engine over a copy of `records`. Throws
/// std::invalid_argument for unsupported record-kind combinations (the k-d
/// tree and octree store points only).
std::unique_ptr<SpatialIndex> make_index(const EngineConfig& cfg,
                                         std::span<const PointRecord> records);
std::unique_ptr<SpatialIndex> make_index(const EngineConfig& cfg,
                                         std::span<const BoxRecord> records);

}  // namespace rangebench
