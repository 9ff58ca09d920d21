#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rangebench/geom.hpp"

namespace rangebench {

/// Synthetic unstructured hex mesh: a jittered regular grid. Node positions
/// are a pure function of (seed, node index), so generation is deterministic
/// and order-independent.
struct MeshSpec {
    int nx = 2;
    int ny = 2;
    int nz = 2;
    Aabb domain{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    /// Per-axis perturbation as a fraction of the grid spacing, in [0, 0.5).
    double jitter = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const MeshSpec&, const MeshSpec&) = default;

    std::size_t node_count() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nz);
    }
    std::size_t element_count() const {
        return static_cast<std::size_t>(nx - 1) * static_cast<std::size_t>(ny - 1) *
               static_cast<std::size_t>(nz - 1);
    }
};

struct Mesh {
    MeshSpec spec;
    std::vector<PointRecord> points;    // one per grid node, id = linear node index
    std::vector<BoxRecord> elements;    // one per grid cell, AABB of its 8 corners
};

/// Throws std::invalid_argument naming the offending field for resolutions
/// < 2, jitter outside [0, 0.5) or an invalid domain.
Mesh generate_mesh(const MeshSpec& spec);

/// One worker's share of the mesh after axis-aligned block decomposition of
/// the cell grid. Record ids are re-numbered densely per worker.
struct WorkerSubset {
    int worker_id = 0;
    std::array<int, 3> cell_lo{};  // inclusive cell range of the block
    std::array<int, 3> cell_hi{};  // exclusive
    std::vector<PointRecord> points;
    std::vector<BoxRecord> elements;
};

/// Recursive coordinate bisection of the cell grid. Every element belongs to
/// exactly one worker; each worker receives the nodes of its cells, so nodes
/// on inter-block faces are duplicated into every touching worker. Throws for
/// workers < 1 or workers > element count.
std::vector<WorkerSubset> decompose(const Mesh& mesh, int workers);

}  // namespace rangebench
