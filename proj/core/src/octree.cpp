#include "rangebench/octree.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace rangebench {

namespace {

Aabb octant_cell(const Aabb& cell, const Point3& mid, int octant) {
    Aabb child = cell;
    for (int axis = 0; axis < 3; ++axis) {
        if ((octant >> (2 - axis)) & 1) {
            child.min[axis] = mid[axis];
        } else {
            child.max[axis] = mid[axis];
        }
    }
    return child;
}

}  // namespace

Octree::Octree(std::span<const PointRecord> records, OctConfig cfg)
    : mem_(std::make_unique<MemoryCounter>()),
      nodes_(CountingAllocator<Node>(mem_.get())),
      points_(records.begin(), records.end(), CountingAllocator<PointRecord>(mem_.get())),
      leaf_size_(cfg.leaf_size),
      max_depth_(cfg.max_depth) {
    if (cfg.leaf_size < 1) throw std::invalid_argument("OctConfig: leaf_size must be >= 1");
    if (cfg.max_depth < 1) throw std::invalid_argument("OctConfig: max_depth must be >= 1");
    if (points_.empty()) return;

    const Aabb tight = bounds_of(points_.data(), points_.data() + points_.size());
    const Point3 center = tight.center();
    double half = 0.0;
    for (int axis = 0; axis < 3; ++axis) half = std::max(half, 0.5 * tight.extent(axis));
    Aabb cube;
    cube.min = {center.x - half, center.y - half, center.z - half};
    cube.max = {center.x + half, center.y + half, center.z + half};

    nodes_.push_back(Node{cube, -1, 0, static_cast<std::uint32_t>(points_.size())});
    root_ = 0;
    build_node(root_, 1);
}

void Octree::build_node(std::int32_t index, int depth) {
    const std::uint32_t begin = nodes_[index].begin;
    const std::uint32_t end = nodes_[index].end;
    const Aabb cell = nodes_[index].cell;
    if (end - begin <= static_cast<std::uint32_t>(leaf_size_) || depth >= max_depth_) return;

    const Point3 mid = cell.center();

    // Three nested partitions produce the eight octant groups in index order
    // (x major, z minor). Membership is half-open: a point exactly on a
    // splitting plane goes to the high-side child.
    PointRecord* base = points_.data();
    std::array<std::uint32_t, 9> cut{};
    cut[0] = begin;
    cut[8] = end;
    cut[4] = static_cast<std::uint32_t>(
        std::partition(base + begin, base + end,
                       [&](const PointRecord& r) { return r.point.x < mid.x; }) -
        base);
    for (int half = 0; half < 2; ++half) {
        const std::uint32_t lo = cut[half * 4];
        const std::uint32_t hi = cut[half * 4 + 4];
        cut[half * 4 + 2] = static_cast<std::uint32_t>(
            std::partition(base + lo, base + hi,
                           [&](const PointRecord& r) { return r.point.y < mid.y; }) -
            base);
    }
    for (int quarter = 0; quarter < 4; ++quarter) {
        const std::uint32_t lo = cut[quarter * 2];
        const std::uint32_t hi = cut[quarter * 2 + 2];
        cut[quarter * 2 + 1] = static_cast<std::uint32_t>(
            std::partition(base + lo, base + hi,
                           [&](const PointRecord& r) { return r.point.z < mid.z; }) -
            base);
    }

    const std::int32_t children = static_cast<std::int32_t>(nodes_.size());
    for (int octant = 0; octant < 8; ++octant) {
        nodes_.push_back(Node{octant_cell(cell, mid, octant), -1, cut[octant], cut[octant + 1]});
    }
    nodes_[index].children_base = children;
    for (int octant = 0; octant < 8; ++octant) {
        if (cut[octant + 1] > cut[octant]) build_node(children + octant, depth + 1);
    }
}

Aabb Octree::root_cell() const { return root_ < 0 ? Aabb{} : nodes_[root_].cell; }

Octree::TreeStats Octree::stats() const {
    TreeStats out;
    if (root_ < 0) return out;
    std::vector<std::pair<std::int32_t, int>> stack{{root_, 1}};
    while (!stack.empty()) {
        const auto [index, depth] = stack.back();
        stack.pop_back();
        out.max_depth_reached = std::max(out.max_depth_reached, depth);
        const Node& node = nodes_[index];
        if (node.is_leaf()) {
            ++out.leaf_nodes;
            const std::uint32_t count = node.end - node.begin;
            if (count > 0) ++out.nonempty_leaves;
            if (count > static_cast<std::uint32_t>(leaf_size_)) ++out.oversized_leaves;
        } else {
            ++out.internal_nodes;
            for (int octant = 0; octant < 8; ++octant) {
                stack.push_back({node.children_base + octant, depth + 1});
            }
        }
    }
    return out;
}

void Octree::collect_sphere(std::int32_t index, const Sphere& s,
                            std::vector<std::uint32_t>& hits, QueryStats* stats) const {
    const Node& node = nodes_[index];
    if (node.begin == node.end) return;
    if (min_squared_distance(node.cell, s.center) > s.radius * s.radius) return;
    if (stats) ++stats->nodes_visited;

    if (sphere_contains_box(s, node.cell)) {
        for (std::uint32_t i = node.begin; i < node.end; ++i) hits.push_back(i);
        return;
    }
    if (node.is_leaf()) {
        if (stats) ++stats->leaves_visited;
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            if (sphere_contains_point(s, points_[i].point)) hits.push_back(i);
        }
        return;
    }
    for (int octant = 0; octant < 8; ++octant) {
        collect_sphere(node.children_base + octant, s, hits, stats);
    }
}

void Octree::query_sphere(const Sphere& s, std::vector<RecordId>& out,
                          QueryStats* stats) const {
    out.clear();
    if (root_ < 0) return;
    thread_local std::vector<std::uint32_t> hits;
    hits.clear();
    collect_sphere(root_, s, hits, stats);
    if (stats) stats->candidates += hits.size();
    out.reserve(hits.size());
    for (const std::uint32_t i : hits) out.push_back(points_[i].id);
}

void Octree::query_box(const Aabb& q, std::vector<RecordId>& out, QueryStats* stats) const {
    out.clear();
    if (root_ < 0) return;

    // Phase 1: query the minimal sphere enclosing the box.
    const Sphere s = enclosing_sphere(q);
    thread_local std::vector<std::uint32_t> candidates;
    candidates.clear();
    collect_sphere(root_, s, candidates, stats);
    if (stats) stats->candidates += candidates.size();

    // Phase 2: exact filtering of the sphere-phase candidates.
    for (const std::uint32_t i : candidates) {
        if (box_contains_point(q, points_[i].point)) out.push_back(points_[i].id);
    }
}

void Octree::check_node(std::int32_t index, int depth) const {
    const Node& node = nodes_[index];
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
        if (!box_contains_point(node.cell, points_[i].point)) {
            throw std::logic_error("octree: record outside its node cell");
        }
    }
    if (node.is_leaf()) {
        if (node.end - node.begin > static_cast<std::uint32_t>(leaf_size_) &&
            depth < max_depth_) {
            throw std::logic_error("octree: oversized leaf above max depth");
        }
        return;
    }

    // Exactly eight children whose cells tile the parent cell: each child is
    // the expected octant of the parent, so cells share boundaries and cover
    // the parent exactly.
    const Point3 mid = node.cell.center();
    std::uint32_t covered = node.begin;
    for (int octant = 0; octant < 8; ++octant) {
        const std::int32_t ci = node.children_base + octant;
        if (ci < 0 || static_cast<std::size_t>(ci) >= nodes_.size()) {
            throw std::logic_error("octree: missing child");
        }
        const Node& child = nodes_[ci];
        if (!(child.cell == octant_cell(node.cell, mid, octant))) {
            throw std::logic_error("octree: child cell is not the parent's octant");
        }
        if (child.begin != covered) {
            throw std::logic_error("octree: children do not partition the record range");
        }
        covered = child.end;
        check_node(ci, depth + 1);
    }
    if (covered != node.end) {
        throw std::logic_error("octree: children do not cover the record range");
    }
}

void Octree::check_invariants() const {
    if (root_ < 0) {
        if (!points_.empty()) throw std::logic_error("octree: empty tree but records present");
        return;
    }
    if (nodes_[root_].begin != 0 || nodes_[root_].end != points_.size()) {
        throw std::logic_error("octree: root range does not cover all records");
    }
    const Aabb cell = nodes_[root_].cell;
    const double side = cell.extent(0);
    if (std::abs(cell.extent(1) - side) > 1e-12 * std::max(1.0, side) ||
        std::abs(cell.extent(2) - side) > 1e-12 * std::max(1.0, side)) {
        throw std::logic_error("octree: root cell is not a cube");
    }
    check_node(root_, 1);
}

}  // namespace rangebench
