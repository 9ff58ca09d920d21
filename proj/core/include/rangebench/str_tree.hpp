#pragma once

#include <memory>
#include <span>
#include <string>

#include "rangebench/engine.hpp"
#include "rangebench/geom.hpp"
#include "rangebench/memory.hpp"

namespace rangebench {

struct RTreeConfig {
    /// Maximum branching factor M; doubles as the leaf capacity.
    int max_fanout = 200;
    /// Minimum fanout m; 0 selects the default ceil(0.4 * M).
    int min_fanout = 0;
};

/// R-tree bulk-loaded with Sort-Tile-Recursive packing. Stores point or box
/// records; leaves keep contiguous record ranges, each level is packed from
/// the tiled order of the level below. Static: no insert or delete.
template <typename RecordT>
class StrTree final : public SpatialIndex {
public:
    StrTree(std::span<const RecordT> records, RTreeConfig cfg);

    void query_box(const Aabb& q, std::vector<RecordId>& out,
                   QueryStats* stats = nullptr) const override;

    std::size_t size() const override { return records_.size(); }
    std::size_t memory_bytes() const override { return mem_->current(); }
    std::size_t peak_memory_bytes() const override { return mem_->peak(); }
    std::string_view kind_name() const override { return "rtree"; }
    std::string config_label() const override;

    void check_invariants() const override;

    /// Number of node levels; 0 for an empty tree, ceil(log_M n) otherwise
    /// (1 when a single leaf is the root).
    int height() const { return height_; }
    Aabb root_mbr() const;
    int max_fanout() const { return max_fanout_; }
    int min_fanout() const { return min_fanout_; }

private:
    struct Node {
        Aabb mbr;
        std::uint32_t begin = 0;  // leaf: record range; internal: child node range
        std::uint32_t end = 0;
        bool leaf = true;
    };

    void query_node(std::int32_t index, const Aabb& q, std::vector<RecordId>& out,
                    QueryStats* stats) const;
    Aabb check_node(std::int32_t index, int level_from_root) const;

    std::unique_ptr<MemoryCounter> mem_;  // must outlive the counted containers
    CountedVector<RecordT> records_;      // in leaf-tiled order
    CountedVector<Node> nodes_;           // level by level, root last
    std::int32_t root_ = -1;
    int max_fanout_ = 0;
    int min_fanout_ = 0;
    int height_ = 0;
};

extern template class StrTree<PointRecord>;
extern template class StrTree<BoxRecord>;

using StrTreePoints = StrTree<PointRecord>;
using StrTreeBoxes = StrTree<BoxRecord>;

}  // namespace rangebench
