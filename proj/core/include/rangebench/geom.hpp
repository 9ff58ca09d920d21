#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace rangebench {

/// 3D coordinate. Components are expected to be finite.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double operator[](int axis) const {
        assert(axis >= 0 && axis < 3);
        return axis == 0 ? x : (axis == 1 ? y : z);
    }
    double& operator[](int axis) {
        assert(axis >= 0 && axis < 3);
        return axis == 0 ? x : (axis == 1 ? y : z);
    }

    friend bool operator==(const Point3&, const Point3&) = default;
};

/// Closed axis-aligned box: min[c] <= max[c] for every component.
/// Zero-extent faces (degenerate boxes) are permitted.
struct Aabb {
    Point3 min;
    Point3 max;

    friend bool operator==(const Aabb&, const Aabb&) = default;

    Point3 center() const {
        return {0.5 * (min.x + max.x), 0.5 * (min.y + max.y), 0.5 * (min.z + max.z)};
    }
    double extent(int axis) const { return max[axis] - min[axis]; }

    /// Index of the longest side; ties go to the lowest axis index.
    int longest_axis() const {
        int best = 0;
        for (int a = 1; a < 3; ++a) {
            if (extent(a) > extent(best)) best = a;
        }
        return best;
    }
};

/// Closed ball: contains points at squared distance <= radius^2.
struct Sphere {
    Point3 center;
    double radius = 0.0;
};

/// Dense per-dataset record identifier: the i-th record of a dataset has id i.
using RecordId = std::uint32_t;

/// Which record flavor a dataset holds: mesh-node coordinates or element
/// bounding boxes.
enum class RecordKind : std::uint8_t { Points = 0, Boxes = 1 };

struct PointRecord {
    Point3 point;
    RecordId id = 0;
};

struct BoxRecord {
    Aabb bounds;
    RecordId id = 0;
};

inline bool is_finite(const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

inline bool is_valid(const Aabb& b) {
    return is_finite(b.min) && is_finite(b.max) && b.min.x <= b.max.x &&
           b.min.y <= b.max.y && b.min.z <= b.max.z;
}

inline bool is_valid(const Sphere& s) {
    return is_finite(s.center) && std::isfinite(s.radius) && s.radius >= 0.0;
}

/// Closed-boundary containment: boundary points count as inside.
inline bool box_contains_point(const Aabb& b, const Point3& p) {
    return p.x >= b.min.x && p.x <= b.max.x && p.y >= b.min.y && p.y <= b.max.y &&
           p.z >= b.min.z && p.z <= b.max.z;
}

/// Closed-interval overlap in all three dimensions; shared faces, edges and
/// corners count as intersecting.
inline bool box_intersects_box(const Aabb& a, const Aabb& b) {
    return a.min.x <= b.max.x && b.min.x <= a.max.x && a.min.y <= b.max.y &&
           b.min.y <= a.max.y && a.min.z <= b.max.z && b.min.z <= a.max.z;
}

/// True iff `inner` lies entirely within `outer` (closed semantics).
inline bool box_contains_box(const Aabb& outer, const Aabb& inner) {
    return inner.min.x >= outer.min.x && inner.max.x <= outer.max.x &&
           inner.min.y >= outer.min.y && inner.max.y <= outer.max.y &&
           inner.min.z >= outer.min.z && inner.max.z <= outer.max.z;
}

inline double squared_distance(const Point3& a, const Point3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

/// Squared distance from `p` to the farthest point of the box.
inline double max_squared_distance(const Aabb& b, const Point3& p) {
    double d2 = 0.0;
    for (int a = 0; a < 3; ++a) {
        const double d = std::max(std::abs(p[a] - b.min[a]), std::abs(p[a] - b.max[a]));
        d2 += d * d;
    }
    return d2;
}

/// Minimal enclosing sphere of a box: center at the box midpoint, radius half
/// the diagonal length. The radius is rounded up so that every corner passes
/// sphere_contains_point despite rounding; the sphere-encompass box adapter
/// relies on this to stay exact at query corners.
inline Sphere enclosing_sphere(const Aabb& b) {
    const Point3 c = b.center();
    const double corner_d2 = max_squared_distance(b, c);
    double radius = std::sqrt(corner_d2);
    while (radius * radius < corner_d2) {
        radius = std::nextafter(radius, std::numeric_limits<double>::infinity());
    }
    return {c, radius};
}

inline bool sphere_contains_point(const Sphere& s, const Point3& p) {
    return squared_distance(s.center, p) <= s.radius * s.radius;
}

/// Squared distance from `p` to the nearest point of the box (0 if inside).
inline double min_squared_distance(const Aabb& b, const Point3& p) {
    double d2 = 0.0;
    for (int a = 0; a < 3; ++a) {
        const double v = p[a];
        if (v < b.min[a]) {
            const double d = b.min[a] - v;
            d2 += d * d;
        } else if (v > b.max[a]) {
            const double d = v - b.max[a];
            d2 += d * d;
        }
    }
    return d2;
}

inline bool sphere_intersects_box(const Sphere& s, const Aabb& b) {
    return min_squared_distance(b, s.center) <= s.radius * s.radius;
}

/// True iff every point of the box lies inside the closed ball.
inline bool sphere_contains_box(const Sphere& s, const Aabb& b) {
    return max_squared_distance(b, s.center) <= s.radius * s.radius;
}

inline Aabb record_bounds(const PointRecord& r) { return {r.point, r.point}; }
inline Aabb record_bounds(const BoxRecord& r) { return r.bounds; }

/// Point records match a query box by containment; box records by overlap.
inline bool matches_query(const Aabb& q, const PointRecord& r) {
    return box_contains_point(q, r.point);
}
inline bool matches_query(const Aabb& q, const BoxRecord& r) {
    return box_intersects_box(q, r.bounds);
}

inline void expand_to_include(Aabb& b, const Point3& p) {
    b.min.x = std::min(b.min.x, p.x);
    b.min.y = std::min(b.min.y, p.y);
    b.min.z = std::min(b.min.z, p.z);
    b.max.x = std::max(b.max.x, p.x);
    b.max.y = std::max(b.max.y, p.y);
    b.max.z = std::max(b.max.z, p.z);
}

inline void expand_to_include(Aabb& b, const Aabb& other) {
    expand_to_include(b, other.min);
    expand_to_include(b, other.max);
}

/// Tight bounding box of a non-empty record range. Returns a default box for
/// an empty range.
template <typename RecordT>
Aabb bounds_of(const std::vector<RecordT>& records) {
    if (records.empty()) return {};
    Aabb b = record_bounds(records.front());
    for (std::size_t i = 1; i < records.size(); ++i) {
        expand_to_include(b, record_bounds(records[i]));
    }
    return b;
}

template <typename RecordT>
Aabb bounds_of(const RecordT* first, const RecordT* last) {
    if (first == last) return {};
    Aabb b = record_bounds(*first);
    for (const RecordT* it = first + 1; it != last; ++it) {
        expand_to_include(b, record_bounds(*it));
    }
    return b;
}

}  // namespace rangebench
