#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "rangebench/brute_force.hpp"
#include "rangebench/geom.hpp"

namespace rangebench {

/// The four benchmark selectivity classes. Targets are the fraction of stored
/// records a query should return; counts are fixed per class.
struct QueryClass {
    std::string_view name;
    double target_selectivity;
    int count_full;
    int count_reduced;
};

inline constexpr std::array<QueryClass, 4> kQueryClasses{{
    {"xsmall", 1e-5, 10000, 1000},
    {"small", 1e-3, 10000, 1000},
    {"medium", 1e-2, 10000, 1000},
    {"large", 1e-1, 1000, 100},
}};

enum class CountMode { Full, Reduced };

inline int query_count(const QueryClass& cls, CountMode mode) {
    return mode == CountMode::Full ? cls.count_full : cls.count_reduced;
}

/// Calibrated query set for one class: cube queries with centers uniform over
/// the data bounding box, edge length tuned so the probe-mean selectivity
/// lands within 10% relative of the class target.
struct ClassWorkload {
    int class_index = 0;
    double side = 0.0;
    /// Mean selectivity of a 100-query audit over freshly drawn queries.
    double achieved_selectivity = 0.0;
    std::vector<Aabb> queries;
};

struct QueryWorkload {
    std::array<ClassWorkload, 4> classes;
};

/// Calibrates one class against the store (the probe oracle) and generates
/// `count` queries. Bisection on the cube side runs for at most 30 probe
/// rounds of 100 queries each; failure to converge throws std::runtime_error
/// naming the class. Requires n >= 1000.
template <typename RecordT>
ClassWorkload calibrate_class(const BruteForce<RecordT>& store, int class_index,
                              double target_selectivity, int count, std::uint64_t seed);

template <typename RecordT>
QueryWorkload calibrate_workload(const BruteForce<RecordT>& store, CountMode mode,
                                 std::uint64_t seed);

extern template ClassWorkload calibrate_class<PointRecord>(const BruteForce<PointRecord>&, int,
                                                           double, int, std::uint64_t);
extern template ClassWorkload calibrate_class<BoxRecord>(const BruteForce<BoxRecord>&, int,
                                                         double, int, std::uint64_t);
extern template QueryWorkload calibrate_workload<PointRecord>(const BruteForce<PointRecord>&,
                                                              CountMode, std::uint64_t);
extern template QueryWorkload calibrate_workload<BoxRecord>(const BruteForce<BoxRecord>&,
                                                            CountMode, std::uint64_t);

}  // namespace rangebench
