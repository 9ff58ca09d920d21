#pragma once

#include <memory>
#include <span>
#include <string>

#include "rangebench/engine.hpp"
#include "rangebench/geom.hpp"
#include "rangebench/memory.hpp"

namespace rangebench {

struct OctConfig {
    int leaf_size = 200;
    /// Recursion guard; coincident points beyond leaf_size stay in an
    /// oversized leaf at this depth.
    int max_depth = 32;
};

/// Region-based point octree: the root cell is a cube (side = largest extent
/// of the tight bounding box, centered on it) and every internal node has
/// exactly eight children that partition its cell. Sphere queries are native;
/// box queries run through the sphere-encompass-then-filter adapter so the
/// adapter's cost shows up in measurements.
class Octree final : public SpatialIndex {
public:
    Octree(std::span<const PointRecord> records, OctConfig cfg);

    /// Sphere-encompass adapter: queries the enclosing sphere of `q`, then
    /// filters candidates with the exact box test. stats->candidates is the
    /// sphere-phase hit count.
    void query_box(const Aabb& q, std::vector<RecordId>& out,
                   QueryStats* stats = nullptr) const override;

    void query_sphere(const Sphere& s, std::vector<RecordId>& out,
                      QueryStats* stats = nullptr) const;

    std::size_t size() const override { return points_.size(); }
    std::size_t memory_bytes() const override { return mem_->current(); }
    std::size_t peak_memory_bytes() const override { return mem_->peak(); }
    std::string_view kind_name() const override { return "octree"; }
    std::string config_label() const override { return "leaf=" + std::to_string(leaf_size_); }
    bool box_query_is_adapter() const override { return true; }

    void check_invariants() const override;

    Aabb root_cell() const;
    int leaf_size() const { return leaf_size_; }
    int max_depth_limit() const { return max_depth_; }

    struct TreeStats {
        std::size_t internal_nodes = 0;
        std::size_t leaf_nodes = 0;        // includes empty octants
        std::size_t nonempty_leaves = 0;
        std::size_t oversized_leaves = 0;  // legal only at the depth limit
        int max_depth_reached = 0;         // root is depth 1
    };
    TreeStats stats() const;

private:
    struct Node {
        Aabb cell;
        std::int32_t children_base = -1;  // internal iff >= 0: eight consecutive nodes
        std::uint32_t begin = 0;          // record range [begin, end) in points_
        std::uint32_t end = 0;

        bool is_leaf() const { return children_base < 0; }
    };

    void build_node(std::int32_t index, int depth);
    void collect_sphere(std::int32_t index, const Sphere& s,
                        std::vector<std::uint32_t>& hits, QueryStats* stats) const;
    void check_node(std::int32_t index, int depth) const;

    std::unique_ptr<MemoryCounter> mem_;  // must outlive the counted containers
    CountedVector<Node> nodes_;
    CountedVector<PointRecord> points_;  // reordered so every subtree is contiguous
    std::int32_t root_ = -1;
    int leaf_size_ = 0;
    int max_depth_ = 0;
};

}  // namespace rangebench
