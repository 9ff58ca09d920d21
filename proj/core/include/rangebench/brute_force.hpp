#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "rangebench/engine.hpp"
#include "rangebench/geom.hpp"

namespace rangebench {

template <typename RecordT>
inline constexpr std::size_t kRecordPayloadBytes = 0;
template <>
inline constexpr std::size_t kRecordPayloadBytes<PointRecord> = 24;  // 3 doubles
template <>
inline constexpr std::size_t kRecordPayloadBytes<BoxRecord> = 48;  // 2 corner points

/// Linear-scan engine: the baseline under benchmark and the ground-truth
/// oracle for every tree's correctness tests. Holds a deep copy of the input
/// in insertion order. Reported memory is the record payload size (24 B per
/// point, 48 B per box), which serves as the raw-size denominator for memory
/// classification.
template <typename RecordT>
class BruteForce final : public SpatialIndex {
public:
    explicit BruteForce(std::span<const RecordT> records)
        : records_(records.begin(), records.end()) {
        for (std::size_t i = 0; i < records_.size(); ++i) {
            if (records_[i].id != static_cast<RecordId>(i)) {
                throw std::invalid_argument(
                    "BruteForce: record ids must be dense and in order (record " +
                    std::to_string(i) + " has id " + std::to_string(records_[i].id) + ")");
            }
        }
    }

    void query_box(const Aabb& q, std::vector<RecordId>& out,
                   QueryStats* stats = nullptr) const override {
        out.clear();
        for (const RecordT& r : records_) {
            if (matches_query(q, r)) out.push_back(r.id);
        }
        if (stats) {
            stats->nodes_visited = 1;
            stats->leaves_visited = 1;
            stats->candidates = records_.size();
        }
    }

    /// Number of records matching the query; same scan as query_box without
    /// materializing ids. Used by workload calibration probes.
    std::size_t count_box(const Aabb& q) const {
        std::size_t n = 0;
        for (const RecordT& r : records_) {
            if (matches_query(q, r)) ++n;
        }
        return n;
    }

    std::size_t size() const override { return records_.size(); }

    std::size_t payload_bytes() const { return records_.size() * kRecordPayloadBytes<RecordT>; }

    std::size_t memory_bytes() const override { return payload_bytes(); }
    std::size_t peak_memory_bytes() const override { return payload_bytes(); }

    std::string_view kind_name() const override { return "brute"; }
    std::string config_label() const override { return "-"; }

    std::span<const RecordT> records() const { return records_; }

private:
    std::vector<RecordT> records_;
};

using BruteForcePoints = BruteForce<PointRecord>;
using BruteForceBoxes = BruteForce<BoxRecord>;

}  // namespace rangebench
