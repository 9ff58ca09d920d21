#pragma once

// Independently written linear scans used to cross-check the library's
// predicates and engines. These intentionally avoid the geom.hpp predicate
// implementations: membership is computed per axis over coordinate arrays.

#include <array>
#include <vector>

#include "rangebench/geom.hpp"

namespace rangebench::testsupport {

inline std::array<double, 3> axes(const Point3& p) { return {p.x, p.y, p.z}; }

inline bool interval_contains(double lo, double hi, double v) { return !(v < lo) && !(v > hi); }

inline bool intervals_overlap(double alo, double ahi, double blo, double bhi) {
    return !(ahi < blo) && !(bhi < alo);
}

inline std::vector<RecordId> naive_box_scan(const std::vector<PointRecord>& records,
                                            const Aabb& q) {
    const std::array<double, 3> lo = axes(q.min);
    const std::array<double, 3> hi = axes(q.max);
    std::vector<RecordId> out;
    for (const PointRecord& r : records) {
        const std::array<double, 3> p = axes(r.point);
        bool inside = true;
        for (int a = 0; a < 3; ++a) inside = inside && interval_contains(lo[a], hi[a], p[a]);
        if (inside) out.push_back(r.id);
    }
    return out;
}

inline std::vector<RecordId> naive_box_scan(const std::vector<BoxRecord>& records,
                                            const Aabb& q) {
    const std::array<double, 3> qlo = axes(q.min);
    const std::array<double, 3> qhi = axes(q.max);
    std::vector<RecordId> out;
    for (const BoxRecord& r : records) {
        const std::array<double, 3> rlo = axes(r.bounds.min);
        const std::array<double, 3> rhi = axes(r.bounds.max);
        bool overlap = true;
        for (int a = 0; a < 3; ++a) {
            overlap = overlap && intervals_overlap(rlo[a], rhi[a], qlo[a], qhi[a]);
        }
        if (overlap) out.push_back(r.id);
    }
    return out;
}

inline std::vector<RecordId> naive_ball_scan(const std::vector<PointRecord>& records,
                                             const Sphere& s) {
    const std::array<double, 3> c = axes(s.center);
    std::vector<RecordId> out;
    for (const PointRecord& r : records) {
        const std::array<double, 3> p = axes(r.point);
        double d2 = 0.0;
        for (int a = 0; a < 3; ++a) d2 += (p[a] - c[a]) * (p[a] - c[a]);
        if (!(d2 > s.radius * s.radius)) out.push_back(r.id);
    }
    return out;
}

}  // namespace rangebench::testsupport
