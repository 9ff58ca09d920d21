#include "rangebench/workload.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rangebench/rng.hpp"

namespace rangebench {

namespace {

constexpr int kProbeQueries = 100;
constexpr int kMaxRounds = 30;
constexpr double kRelativeBand = 0.10;

/// Probe sample size. 100 queries at benchmark scale; grown for small stores
/// or tiny targets so the expected hit count (~400) resolves the +/-10% band
/// above sampling noise. Probe work per round stays bounded: probes * n is at
/// most ~400/target record tests.
int probe_count(std::size_t n, double target) {
    constexpr double kHitBudget = 400.0;
    const double expected_hits = static_cast<double>(kProbeQueries) * target *
                                 static_cast<double>(n);
    if (expected_hits >= kHitBudget) return kProbeQueries;
    return static_cast<int>(std::ceil(kHitBudget / (target * static_cast<double>(n))));
}

Aabb cube_query(const Point3& center, double side) {
    const double h = 0.5 * side;
    return {{center.x - h, center.y - h, center.z - h},
            {center.x + h, center.y + h, center.z + h}};
}

template <typename RecordT>
double mean_selectivity(const BruteForce<RecordT>& store, const std::vector<Point3>& centers,
                        double side) {
    double total = 0.0;
    for (const Point3& c : centers) {
        total += static_cast<double>(store.count_box(cube_query(c, side)));
    }
    return total / (static_cast<double>(centers.size()) * static_cast<double>(store.size()));
}

bool within_band(double achieved, double target) {
    return std::abs(achieved / target - 1.0) <= kRelativeBand;
}

}  // namespace

template <typename RecordT>
ClassWorkload calibrate_class(const BruteForce<RecordT>& store, int class_index,
                              double target, int count, std::uint64_t seed) {
    if (store.size() < 1000) {
        throw std::invalid_argument("calibrate_class: need at least 1000 records");
    }
    if (target <= 0.0) throw std::invalid_argument("calibrate_class: target must be positive");

    const Aabb bbox = bounds_of(store.records().data(),
                                store.records().data() + store.records().size());
    const double mean_side = (bbox.extent(0) + bbox.extent(1) + bbox.extent(2)) / 3.0;
    const std::string_view class_name =
        class_index >= 0 && class_index < 4 ? kQueryClasses[class_index].name : "custom";

    // Probe centers stay fixed across rounds, making selectivity monotone in
    // the side length.
    const int probes = probe_count(store.size(), target);
    std::mt19937_64 probe_rng(mix_seed(seed, 0x70726f6265ull + class_index));
    std::vector<Point3> probe_centers;
    probe_centers.reserve(static_cast<std::size_t>(probes));
    for (int i = 0; i < probes; ++i) {
        probe_centers.push_back(uniform_point_in(probe_rng, bbox));
    }

    int rounds = 0;
    const auto measure = [&](double side) {
        ++rounds;
        return mean_selectivity(store, probe_centers, side);
    };

    double side = std::cbrt(target) * mean_side;
    double achieved = measure(side);
    if (!within_band(achieved, target)) {
        double lo = 0.0;
        double hi = side;
        bool bracketed = achieved > target;
        // Too small: double until the target is bracketed from above.
        while (!bracketed && rounds < kMaxRounds) {
            lo = hi;
            hi *= 2.0;
            achieved = measure(hi);
            side = hi;
            if (within_band(achieved, target)) break;
            bracketed = achieved > target;
        }
        if (!within_band(achieved, target)) {
            while (rounds < kMaxRounds) {
                side = 0.5 * (lo + hi);
                achieved = measure(side);
                if (within_band(achieved, target)) break;
                (achieved < target ? lo : hi) = side;
            }
        }
        if (!within_band(achieved, target)) {
            throw std::runtime_error("workload calibration failed to converge for class " +
                                     std::string(class_name));
        }
    }

    ClassWorkload workload;
    workload.class_index = class_index;
    workload.side = side;
    workload.queries.reserve(static_cast<std::size_t>(count));
    std::mt19937_64 final_rng(mix_seed(seed, 0x66696e616cull + class_index));
    for (int i = 0; i < count; ++i) {
        workload.queries.push_back(cube_query(uniform_point_in(final_rng, bbox), side));
    }

    // Audit on the freshly drawn queries, not the probe set.
    const std::size_t audit =
        std::min<std::size_t>(workload.queries.size(), static_cast<std::size_t>(probes));
    double total = 0.0;
    for (std::size_t i = 0; i < audit; ++i) {
        total += static_cast<double>(store.count_box(workload.queries[i]));
    }
    workload.achieved_selectivity =
        audit == 0 ? 0.0 : total / (static_cast<double>(audit) * static_cast<double>(store.size()));
    return workload;
}

template <typename RecordT>
QueryWorkload calibrate_workload(const BruteForce<RecordT>& store, CountMode mode,
                                 std::uint64_t seed) {
    QueryWorkload workload;
    for (int c = 0; c < 4; ++c) {
        workload.classes[c] = calibrate_class(store, c, kQueryClasses[c].target_selectivity,
                                              query_count(kQueryClasses[c], mode), seed);
    }
    return workload;
}

template ClassWorkload calibrate_class<PointRecord>(const BruteForce<PointRecord>&, int, double,
                                                    int, std::uint64_t);
template ClassWorkload calibrate_class<BoxRecord>(const BruteForce<BoxRecord>&, int, double, int,
                                                  std::uint64_t);
template QueryWorkload calibrate_workload<PointRecord>(const BruteForce<PointRecord>&, CountMode,
                                                       std::uint64_t);
template QueryWorkload calibrate_workload<BoxRecord>(const BruteForce<BoxRecord>&, CountMode,
                                                     std::uint64_t);

}  // namespace rangebench
