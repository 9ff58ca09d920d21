#include "rangebench/kd_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace rangebench {

namespace {

bool shape_intersects(const Aabb& q, const Aabb& b) { return box_intersects_box(q, b); }
bool shape_contains_whole(const Aabb& q, const Aabb& b) { return box_contains_box(q, b); }
bool shape_matches(const Aabb& q, const Point3& p) { return box_contains_point(q, p); }

bool shape_intersects(const Sphere& s, const Aabb& b) { return sphere_intersects_box(s, b); }
bool shape_contains_whole(const Sphere& s, const Aabb& b) { return sphere_contains_box(s, b); }
bool shape_matches(const Sphere& s, const Point3& p) { return sphere_contains_point(s, p); }

}  // namespace

KdTree::KdTree(std::span<const PointRecord> records, KdConfig cfg)
    : mem_(std::make_unique<MemoryCounter>()),
      nodes_(CountingAllocator<Node>(mem_.get())),
      points_(records.begin(), records.end(), CountingAllocator<PointRecord>(mem_.get())),
      leaf_size_(cfg.leaf_size) {
    if (cfg.leaf_size < 1) throw std::invalid_argument("KdConfig: leaf_size must be >= 1");
    if (points_.empty()) return;

    const Aabb root_box = bounds_of(points_.data(), points_.data() + points_.size());

    struct BuildItem {
        std::int32_t node;
        Aabb cell;
        int depth;
    };
    std::vector<BuildItem> stack;
    stack.reserve(64);

    nodes_.push_back(Node{root_box, 0.0, -1, -1, 0, static_cast<std::uint32_t>(points_.size()), -1});
    root_ = 0;
    stack.push_back({0, root_box, 1});

    while (!stack.empty()) {
        const BuildItem item = stack.back();
        stack.pop_back();
        max_depth_ = std::max(max_depth_, item.depth);

        // Copy out everything needed before push_back can reallocate nodes_.
        const Aabb bounds = nodes_[item.node].bounds;
        const std::uint32_t begin = nodes_[item.node].begin;
        const std::uint32_t end = nodes_[item.node].end;
        const std::uint32_t count = end - begin;

        Aabb cell = item.cell;

        // Split dimension: longest cell side with nonzero point spread. A side
        // with zero spread is collapsed to the point coordinate and the next
        // longest side tried; if all three collapse the points coincide.
        int dim = -1;
        for (int attempt = 0; attempt < 3; ++attempt) {
            const int d = cell.longest_axis();
            if (bounds.extent(d) > 0.0) {
                dim = d;
                break;
            }
            cell.min[d] = cell.max[d] = bounds.min[d];
        }

        if (count <= static_cast<std::uint32_t>(leaf_size_) || dim < 0) {
            ++leaf_count_;  // node stays a leaf
            continue;
        }

        const double mid = 0.5 * (cell.min[dim] + cell.max[dim]);
        const double lo_pt = bounds.min[dim];
        const double hi_pt = bounds.max[dim];

        double split = mid;
        bool equals_go_left = true;
        if (mid < lo_pt) {
            split = lo_pt;  // slide up to the nearest point
        } else if (mid >= hi_pt) {
            split = hi_pt;  // slide down to the nearest point
            equals_go_left = false;
        }

        PointRecord* first = points_.data() + begin;
        PointRecord* last = points_.data() + end;
        PointRecord* pivot =
            equals_go_left
                ? std::partition(first, last,
                                 [&](const PointRecord& r) { return r.point[dim] <= split; })
                : std::partition(first, last,
                                 [&](const PointRecord& r) { return r.point[dim] < split; });
        const std::uint32_t mid_index = begin + static_cast<std::uint32_t>(pivot - first);

        // Sliding guarantees both sides are non-empty whenever the spread in
        // `dim` is nonzero.
        if (mid_index == begin || mid_index == end) {
            throw std::logic_error("KdTree build: sliding-midpoint split produced an empty child");
        }

        const Aabb left_bounds = bounds_of(first, pivot);
        const Aabb right_bounds = bounds_of(pivot, last);
        Aabb left_cell = cell;
        left_cell.max[dim] = split;
        Aabb right_cell = cell;
        right_cell.min[dim] = split;

        const std::int32_t left = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(Node{left_bounds, 0.0, -1, -1, begin, mid_index, -1});
        const std::int32_t right = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(Node{right_bounds, 0.0, -1, -1, mid_index, end, -1});

        nodes_[item.node].split_dim = static_cast<std::int8_t>(dim);
        nodes_[item.node].split_value = split;
        nodes_[item.node].left = left;
        nodes_[item.node].right = right;

        stack.push_back({left, left_cell, item.depth + 1});
        stack.push_back({right, right_cell, item.depth + 1});
    }
}

std::string KdTree::config_label() const { return "leaf=" + std::to_string(leaf_size_); }

void KdTree::for_each_node(const std::function<void(const NodeView&)>& fn) const {
    if (root_ < 0) return;
    std::vector<std::pair<std::int32_t, int>> stack{{root_, 0}};
    while (!stack.empty()) {
        const auto [index, depth] = stack.back();
        stack.pop_back();
        const Node& node = nodes_[index];
        fn(NodeView{node.bounds, node.end - node.begin, node.is_leaf(), node.split_dim,
                    node.split_value, depth});
        if (!node.is_leaf()) {
            stack.push_back({node.right, depth + 1});
            stack.push_back({node.left, depth + 1});
        }
    }
}

Aabb KdTree::root_bounds() const { return root_ < 0 ? Aabb{} : nodes_[root_].bounds; }

void KdTree::emit_range(std::uint32_t begin, std::uint32_t end,
                        std::vector<RecordId>& out) const {
    for (std::uint32_t i = begin; i < end; ++i) out.push_back(points_[i].id);
}

template <typename Shape>
void KdTree::query_impl(const Shape& shape, std::vector<RecordId>& out,
                        QueryStats* stats) const {
    out.clear();
    if (root_ < 0) return;

    thread_local std::vector<std::int32_t> stack;
    stack.clear();
    stack.push_back(root_);

    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        if (!shape_intersects(shape, node.bounds)) continue;
        if (stats) ++stats->nodes_visited;

        if (shape_contains_whole(shape, node.bounds)) {
            emit_range(node.begin, node.end, out);
            continue;
        }
        if (node.is_leaf()) {
            if (stats) {
                ++stats->leaves_visited;
                stats->candidates += node.end - node.begin;
            }
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                if (shape_matches(shape, points_[i].point)) out.push_back(points_[i].id);
            }
            continue;
        }
        stack.push_back(node.left);
        stack.push_back(node.right);
    }
}

void KdTree::query_box(const Aabb& q, std::vector<RecordId>& out, QueryStats* stats) const {
    query_impl(q, out, stats);
}

void KdTree::query_sphere(const Sphere& s, std::vector<RecordId>& out,
                          QueryStats* stats) const {
    query_impl(s, out, stats);
}

void KdTree::check_invariants() const {
    if (root_ < 0) {
        if (!points_.empty()) throw std::logic_error("kd: empty tree but records present");
        return;
    }
    const Aabb tight = bounds_of(points_.data(), points_.data() + points_.size());
    if (nodes_[root_].bounds != tight) {
        throw std::logic_error("kd: root bounds are not the tight bounding box");
    }
    if (nodes_[root_].begin != 0 || nodes_[root_].end != points_.size()) {
        throw std::logic_error("kd: root range does not cover all records");
    }

    std::size_t leaf_records = 0;
    for (std::size_t ni = 0; ni < nodes_.size(); ++ni) {
        const Node& node = nodes_[ni];
        if (node.end < node.begin || node.end > points_.size()) {
            throw std::logic_error("kd: node range out of bounds");
        }
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            if (!box_contains_point(node.bounds, points_[i].point)) {
                throw std::logic_error("kd: record outside node bounds");
            }
        }
        if (node.is_leaf()) {
            const std::uint32_t count = node.end - node.begin;
            leaf_records += count;
            if (count == 0) throw std::logic_error("kd: empty leaf");
            if (count > static_cast<std::uint32_t>(leaf_size_)) {
                // Oversized leaves are legal only for coincident points.
                for (std::uint32_t i = node.begin + 1; i < node.end; ++i) {
                    if (!(points_[i].point == points_[node.begin].point)) {
                        throw std::logic_error("kd: leaf exceeds capacity with distinct points");
                    }
                }
            }
        } else {
            const Node& l = nodes_[node.left];
            const Node& r = nodes_[node.right];
            if (l.begin != node.begin || l.end != r.begin || r.end != node.end) {
                throw std::logic_error("kd: children do not partition the node range");
            }
            if (l.begin == l.end || r.begin == r.end) {
                throw std::logic_error("kd: empty child");
            }
            if (!box_contains_box(node.bounds, l.bounds) ||
                !box_contains_box(node.bounds, r.bounds)) {
                throw std::logic_error("kd: child bounds escape parent bounds");
            }
            const int d = node.split_dim;
            for (std::uint32_t i = l.begin; i < l.end; ++i) {
                if (points_[i].point[d] > node.split_value) {
                    throw std::logic_error("kd: left record beyond split value");
                }
            }
            for (std::uint32_t i = r.begin; i < r.end; ++i) {
                if (points_[i].point[d] < node.split_value) {
                    throw std::logic_error("kd: right record before split value");
                }
            }
        }
    }
    if (leaf_records != points_.size()) {
        throw std::logic_error("kd: leaf ranges do not partition the records");
    }
}

}  // namespace rangebench
