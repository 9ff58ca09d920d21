#include "rangebench/str_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rangebench {

namespace {

/// Sort-Tile-Recursive ordering for one level: sort by center-x, cut into
/// S^2*M vertical slabs, sort each slab by center-y, cut into S*M runs, sort
/// each run by center-z. Consecutive chunks of M in the final order become the
/// nodes of the level above.
template <typename T, typename CenterFn>
void str_tile(T* first, T* last, int max_fanout, CenterFn center) {
    const std::size_t n = static_cast<std::size_t>(last - first);
    if (n <= static_cast<std::size_t>(max_fanout)) return;

    const auto by_axis = [&](int axis) {
        return [axis, &center](const T& a, const T& b) { return center(a)[axis] < center(b)[axis]; };
    };

    const double pages = std::ceil(static_cast<double>(n) / max_fanout);
    const std::size_t slabs = static_cast<std::size_t>(std::ceil(std::cbrt(pages)));
    const std::size_t slab_len = slabs * slabs * static_cast<std::size_t>(max_fanout);
    const std::size_t run_len = slabs * static_cast<std::size_t>(max_fanout);

    std::sort(first, last, by_axis(0));
    for (std::size_t s = 0; s < n; s += slab_len) {
        T* slab_first = first + s;
        T* slab_last = first + std::min(s + slab_len, n);
        std::sort(slab_first, slab_last, by_axis(1));
        const std::size_t slab_n = static_cast<std::size_t>(slab_last - slab_first);
        for (std::size_t r = 0; r < slab_n; r += run_len) {
            std::sort(slab_first + r, slab_first + std::min(r + run_len, slab_n), by_axis(2));
        }
    }
}

}  // namespace

template <typename RecordT>
StrTree<RecordT>::StrTree(std::span<const RecordT> records, RTreeConfig cfg)
    : mem_(std::make_unique<MemoryCounter>()),
      records_(records.begin(), records.end(), CountingAllocator<RecordT>(mem_.get())),
      nodes_(CountingAllocator<Node>(mem_.get())),
      max_fanout_(cfg.max_fanout),
      min_fanout_(cfg.min_fanout) {
    if (max_fanout_ < 2) throw std::invalid_argument("RTreeConfig: max_fanout must be >= 2");
    if (min_fanout_ == 0) min_fanout_ = (max_fanout_ * 2 + 4) / 5;  // ceil(0.4 * M)
    if (min_fanout_ < 1 || min_fanout_ > (max_fanout_ + 1) / 2) {
        throw std::invalid_argument("RTreeConfig: min_fanout must be in [1, ceil(M/2)]");
    }
    if (records_.empty()) return;

    const std::size_t fanout = static_cast<std::size_t>(max_fanout_);

    // Leaf level: tile the records, pack consecutive chunks of M.
    str_tile(records_.data(), records_.data() + records_.size(), max_fanout_,
             [](const RecordT& r) { return record_bounds(r).center(); });
    std::size_t level_begin = 0;
    for (std::size_t i = 0; i < records_.size(); i += fanout) {
        const std::size_t end = std::min(i + fanout, records_.size());
        Node node;
        node.leaf = true;
        node.begin = static_cast<std::uint32_t>(i);
        node.end = static_cast<std::uint32_t>(end);
        node.mbr = bounds_of(records_.data() + i, records_.data() + end);
        nodes_.push_back(node);
    }
    height_ = 1;

    // Upper levels: tile the level's nodes by MBR center, pack chunks of M.
    while (nodes_.size() - level_begin > 1) {
        const std::size_t level_end = nodes_.size();
        str_tile(nodes_.data() + level_begin, nodes_.data() + level_end, max_fanout_,
                 [](const Node& n) { return n.mbr.center(); });
        for (std::size_t i = level_begin; i < level_end; i += fanout) {
            const std::size_t end = std::min(i + fanout, level_end);
            Node node;
            node.leaf = false;
            node.begin = static_cast<std::uint32_t>(i);
            node.end = static_cast<std::uint32_t>(end);
            node.mbr = nodes_[i].mbr;
            for (std::size_t c = i + 1; c < end; ++c) expand_to_include(node.mbr, nodes_[c].mbr);
            nodes_.push_back(node);
        }
        level_begin = level_end;
        ++height_;
    }
    root_ = static_cast<std::int32_t>(nodes_.size()) - 1;
}

// Semicolon separator keeps the label usable as an unquoted CSV field.
template <typename RecordT>
std::string StrTree<RecordT>::config_label() const {
    return "M=" + std::to_string(max_fanout_) + ";m=" + std::to_string(min_fanout_);
}

template <typename RecordT>
Aabb StrTree<RecordT>::root_mbr() const {
    return root_ < 0 ? Aabb{} : nodes_[root_].mbr;
}

template <typename RecordT>
void StrTree<RecordT>::query_node(std::int32_t index, const Aabb& q,
                                  std::vector<RecordId>& out, QueryStats* stats) const {
    const Node& node = nodes_[index];
    if (stats) ++stats->nodes_visited;
    if (node.leaf) {
        if (stats) {
            ++stats->leaves_visited;
            stats->candidates += node.end - node.begin;
        }
        if (box_contains_box(q, node.mbr)) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) out.push_back(records_[i].id);
            return;
        }
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            if (matches_query(q, records_[i])) out.push_back(records_[i].id);
        }
        return;
    }
    for (std::uint32_t c = node.begin; c < node.end; ++c) {
        if (box_intersects_box(q, nodes_[c].mbr)) {
            query_node(static_cast<std::int32_t>(c), q, out, stats);
        }
    }
}

template <typename RecordT>
void StrTree<RecordT>::query_box(const Aabb& q, std::vector<RecordId>& out,
                                 QueryStats* stats) const {
    out.clear();
    if (root_ < 0) return;
    if (box_intersects_box(q, nodes_[root_].mbr)) query_node(root_, q, out, stats);
}

template <typename RecordT>
Aabb StrTree<RecordT>::check_node(std::int32_t index, int level_from_root) const {
    const Node& node = nodes_[index];
    const std::uint32_t count = node.end - node.begin;
    if (count == 0) throw std::logic_error("rtree: empty node");
    if (count > static_cast<std::uint32_t>(max_fanout_)) {
        throw std::logic_error("rtree: node exceeds max fanout");
    }
    if (level_from_root >= height_) throw std::logic_error("rtree: node below leaf level");

    Aabb recomputed;
    if (node.leaf) {
        if (level_from_root != height_ - 1) {
            throw std::logic_error("rtree: leaf not at leaf level");
        }
        recomputed = bounds_of(records_.data() + node.begin, records_.data() + node.end);
    } else {
        recomputed = check_node(static_cast<std::int32_t>(node.begin), level_from_root + 1);
        for (std::uint32_t c = node.begin + 1; c < node.end; ++c) {
            expand_to_include(recomputed,
                              check_node(static_cast<std::int32_t>(c), level_from_root + 1));
        }
        for (std::uint32_t c = node.begin; c < node.end; ++c) {
            if (!box_contains_box(node.mbr, nodes_[c].mbr)) {
                throw std::logic_error("rtree: child mbr escapes parent mbr");
            }
        }
    }
    if (!(recomputed == node.mbr)) throw std::logic_error("rtree: stored mbr is not tight");
    return recomputed;
}

template <typename RecordT>
void StrTree<RecordT>::check_invariants() const {
    if (root_ < 0) {
        if (!records_.empty()) throw std::logic_error("rtree: empty tree but records present");
        return;
    }
    check_node(root_, 0);

    // STR packing leaves at most one under-filled node per level (the
    // trailing one).
    std::vector<std::uint32_t> underfilled_per_level(static_cast<std::size_t>(height_), 0);
    std::size_t leaf_records = 0;
    std::size_t internal_children = 0;
    std::vector<std::pair<std::int32_t, int>> stack{{root_, 0}};
    while (!stack.empty()) {
        const auto [index, level] = stack.back();
        stack.pop_back();
        const Node& node = nodes_[index];
        const std::uint32_t count = node.end - node.begin;
        if (count < static_cast<std::uint32_t>(min_fanout_) &&
            static_cast<std::int32_t>(index) != root_) {
            ++underfilled_per_level[static_cast<std::size_t>(level)];
        }
        if (node.leaf) {
            leaf_records += count;
        } else {
            internal_children += count;
            for (std::uint32_t c = node.begin; c < node.end; ++c) {
                stack.push_back({static_cast<std::int32_t>(c), level + 1});
            }
        }
    }
    if (leaf_records != records_.size()) {
        throw std::logic_error("rtree: leaves do not cover all records");
    }
    // Every non-root node is some parent's child exactly once.
    if (internal_children + 1 != nodes_.size() && height_ > 1) {
        throw std::logic_error("rtree: node graph is not a tree");
    }
    for (std::size_t level = 0; level < underfilled_per_level.size(); ++level) {
        if (underfilled_per_level[level] > 1) {
            throw std::logic_error("rtree: more than one under-filled node on a level");
        }
    }
}

template class StrTree<PointRecord>;
template class StrTree<BoxRecord>;

}  // namespace rangebench
