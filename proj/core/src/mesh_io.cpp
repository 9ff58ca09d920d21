#include "rangebench/mesh_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rangebench {

namespace {

constexpr char kMagic[4] = {'R', 'B', 'M', '1'};
constexpr std::size_t kHeaderBytes = 4 + 1 + 8;

void put_u64le(std::vector<char>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u32le(std::vector<char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64le(std::vector<char>& out, double v) {
    put_u64le(out, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t get_u64le(const char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

std::uint32_t get_u32le(const char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

double get_f64le(const char* p) { return std::bit_cast<double>(get_u64le(p)); }

void write_file(const std::filesystem::path& path, const std::vector<char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    const std::streamsize size = in.tellg();
    in.seekg(0);
    std::vector<char> bytes(static_cast<std::size_t>(size));
    in.read(bytes.data(), size);
    if (!in) throw std::runtime_error("read failed: " + path.string());
    return bytes;
}

void put_header(std::vector<char>& out, RecordKind kind, std::uint64_t count) {
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(static_cast<char>(kind));
    put_u64le(out, count);
}

RecordFileHeader parse_header(const std::vector<char>& bytes, const std::filesystem::path& path) {
    if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw std::runtime_error("not an RBM1 record file: " + path.string());
    }
    const unsigned char kind_byte = static_cast<unsigned char>(bytes[4]);
    if (kind_byte > 1) {
        throw std::runtime_error("unknown record kind in " + path.string());
    }
    return {static_cast<RecordKind>(kind_byte), get_u64le(bytes.data() + 5)};
}

}  // namespace

void write_point_records(const std::filesystem::path& path,
                         std::span<const PointRecord> records) {
    std::vector<char> bytes;
    bytes.reserve(kHeaderBytes + records.size() * 28);
    put_header(bytes, RecordKind::Points, records.size());
    for (const PointRecord& r : records) {
        put_f64le(bytes, r.point.x);
        put_f64le(bytes, r.point.y);
        put_f64le(bytes, r.point.z);
        put_u32le(bytes, r.id);
    }
    write_file(path, bytes);
}

void write_box_records(const std::filesystem::path& path, std::span<const BoxRecord> records) {
    std::vector<char> bytes;
    bytes.reserve(kHeaderBytes + records.size() * 52);
    put_header(bytes, RecordKind::Boxes, records.size());
    for (const BoxRecord& r : records) {
        put_f64le(bytes, r.bounds.min.x);
        put_f64le(bytes, r.bounds.min.y);
        put_f64le(bytes, r.bounds.min.z);
        put_f64le(bytes, r.bounds.max.x);
        put_f64le(bytes, r.bounds.max.y);
        put_f64le(bytes, r.bounds.max.z);
        put_u32le(bytes, r.id);
    }
    write_file(path, bytes);
}

RecordFileHeader read_record_header(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::vector<char> bytes(kHeaderBytes);
    in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!in) throw std::runtime_error("truncated record file: " + path.string());
    return parse_header(bytes, path);
}

std::vector<PointRecord> read_point_records(const std::filesystem::path& path) {
    const std::vector<char> bytes = read_file(path);
    const RecordFileHeader header = parse_header(bytes, path);
    if (header.kind != RecordKind::Points) {
        throw std::runtime_error("expected point records in " + path.string());
    }
    if (bytes.size() != kHeaderBytes + header.count * 28) {
        throw std::runtime_error("record file size mismatch: " + path.string());
    }
    std::vector<PointRecord> records;
    records.reserve(header.count);
    const char* p = bytes.data() + kHeaderBytes;
    for (std::uint64_t i = 0; i < header.count; ++i, p += 28) {
        records.push_back(
            {{get_f64le(p), get_f64le(p + 8), get_f64le(p + 16)}, get_u32le(p + 24)});
    }
    return records;
}

std::vector<BoxRecord> read_box_records(const std::filesystem::path& path) {
    const std::vector<char> bytes = read_file(path);
    const RecordFileHeader header = parse_header(bytes, path);
    if (header.kind != RecordKind::Boxes) {
        throw std::runtime_error("expected box records in " + path.string());
    }
    if (bytes.size() != kHeaderBytes + header.count * 52) {
        throw std::runtime_error("record file size mismatch: " + path.string());
    }
    std::vector<BoxRecord> records;
    records.reserve(header.count);
    const char* p = bytes.data() + kHeaderBytes;
    for (std::uint64_t i = 0; i < header.count; ++i, p += 52) {
        records.push_back({{{get_f64le(p), get_f64le(p + 8), get_f64le(p + 16)},
                            {get_f64le(p + 24), get_f64le(p + 32), get_f64le(p + 40)}},
                           get_u32le(p + 48)});
    }
    return records;
}

}  // namespace rangebench
