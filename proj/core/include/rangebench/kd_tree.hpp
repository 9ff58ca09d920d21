#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>

#include "rangebench/engine.hpp"
#include "rangebench/geom.hpp"
#include "rangebench/memory.hpp"

namespace rangebench {

struct KdConfig {
    int leaf_size = 200;
};

/// Static bulk-built k-d tree over point records using sliding-midpoint
/// splitting: the candidate split is the midpoint of the longest side of the
/// node's cell, slid to the nearest point coordinate whenever one side would
/// be empty. Stored node bounds are the tight bounding boxes of each node's
/// records; cells exist only during construction.
///
/// Records are copied into contiguous per-leaf storage. Immutable after
/// build; concurrent queries are safe.
class KdTree final : public SpatialIndex {
public:
    KdTree(std::span<const PointRecord> records, KdConfig cfg);

    void query_box(const Aabb& q, std::vector<RecordId>& out,
                   QueryStats* stats = nullptr) const override;

    /// Collects ids of all points inside the closed ball. Children are pruned
    /// by the box-to-center minimum distance test.
    void query_sphere(const Sphere& s, std::vector<RecordId>& out,
                      QueryStats* stats = nullptr) const;

    std::size_t size() const override { return static_cast<std::size_t>(points_.size()); }
    std::size_t memory_bytes() const override { return mem_->current(); }
    std::size_t peak_memory_bytes() const override { return mem_->peak(); }
    std::string_view kind_name() const override { return "kd"; }
    std::string config_label() const override;

    void check_invariants() const override;

    /// Tight bounding box of all records (default-constructed when empty).
    Aabb root_bounds() const;
    std::size_t leaf_count() const { return leaf_count_; }
    int max_depth() const { return max_depth_; }
    int leaf_size() const { return leaf_size_; }

    /// Structural snapshot of one node, for tests and debugging.
    struct NodeView {
        Aabb bounds;
        std::uint32_t count = 0;
        bool leaf = true;
        int split_dim = -1;
        double split_value = 0.0;
        int depth = 0;
    };
    /// Preorder walk over all nodes.
    void for_each_node(const std::function<void(const NodeView&)>& fn) const;

private:
    struct Node {
        Aabb bounds;                // tight box of the node's records
        double split_value = 0.0;
        std::int32_t left = -1;     // internal iff left >= 0
        std::int32_t right = -1;
        std::uint32_t begin = 0;    // record range [begin, end) in points_
        std::uint32_t end = 0;
        std::int8_t split_dim = -1;

        bool is_leaf() const { return left < 0; }
    };

    template <typename Shape>
    void query_impl(const Shape& shape, std::vector<RecordId>& out, QueryStats* stats) const;

    void emit_range(std::uint32_t begin, std::uint32_t end, std::vector<RecordId>& out) const;

    std::unique_ptr<MemoryCounter> mem_;  // must outlive the counted containers
    CountedVector<Node> nodes_;
    CountedVector<PointRecord> points_;  // reordered so every subtree is contiguous
    std::int32_t root_ = -1;
    int leaf_size_ = 0;
    std::size_t leaf_count_ = 0;
    int max_depth_ = 0;
};

}  // namespace rangebench
