#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rangebench/geom.hpp"

namespace rangebench {

/// Flat binary record file.
///
/// Layout (all integers and doubles little-endian):
///   bytes 0..3   magic "RBM1"
///   byte  4      record kind: 0 = points, 1 = boxes
///   bytes 5..12  record count, unsigned 64-bit
///   then per record:
///     points: x, y, z as 64-bit IEEE doubles, then the 32-bit id  (28 bytes)
///     boxes:  min.x, min.y, min.z, max.x, max.y, max.z, then the id (52 bytes)
struct RecordFileHeader {
    RecordKind kind = RecordKind::Points;
    std::uint64_t count = 0;
};

void write_point_records(const std::filesystem::path& path, std::span<const PointRecord> records);
void write_box_records(const std::filesystem::path& path, std::span<const BoxRecord> records);

/// Reads only the header. Throws std::runtime_error on I/O failure or a bad
/// magic/kind byte.
RecordFileHeader read_record_header(const std::filesystem::path& path);

std::vector<PointRecord> read_point_records(const std::filesystem::path& path);
std::vector<BoxRecord> read_box_records(const std::filesystem::path& path);

}  // namespace rangebench
