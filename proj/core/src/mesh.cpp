#include "rangebench/mesh.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "rangebench/rng.hpp"

namespace rangebench {

namespace {

void validate(const MeshSpec& spec) {
    const auto require = [](bool ok, const char* message) {
        if (!ok) throw std::invalid_argument(message);
    };
    require(spec.nx >= 2, "MeshSpec: nx must be >= 2 (elements need one cell per axis)");
    require(spec.ny >= 2, "MeshSpec: ny must be >= 2 (elements need one cell per axis)");
    require(spec.nz >= 2, "MeshSpec: nz must be >= 2 (elements need one cell per axis)");
    require(spec.jitter >= 0.0 && spec.jitter < 0.5, "MeshSpec: jitter must be in [0, 0.5)");
    require(is_valid(spec.domain), "MeshSpec: domain is not a valid box");
    require(spec.domain.min.x < spec.domain.max.x && spec.domain.min.y < spec.domain.max.y &&
                spec.domain.min.z < spec.domain.max.z,
            "MeshSpec: domain must have positive extent on every axis");
}

/// Jitter offset for one node axis in [-jitter, jitter) grid spacings,
/// derived statelessly from the seed and node index.
double jitter_offset(std::uint64_t seed, std::size_t node_index, int axis, double jitter) {
    const std::uint64_t bits =
        splitmix64(seed ^ splitmix64(node_index * 3 + static_cast<std::uint64_t>(axis) + 1));
    return (2.0 * to_unit_double(bits) - 1.0) * jitter;
}

}  // namespace

Mesh generate_mesh(const MeshSpec& spec) {
    validate(spec);

    const std::array<int, 3> dims{spec.nx, spec.ny, spec.nz};
    std::array<double, 3> spacing{};
    for (int a = 0; a < 3; ++a) spacing[a] = spec.domain.extent(a) / (dims[a] - 1);

    Mesh mesh;
    mesh.spec = spec;
    mesh.points.reserve(spec.node_count());

    std::size_t index = 0;
    for (int k = 0; k < spec.nz; ++k) {
        for (int j = 0; j < spec.ny; ++j) {
            for (int i = 0; i < spec.nx; ++i, ++index) {
                Point3 p{spec.domain.min.x + i * spacing[0],
                         spec.domain.min.y + j * spacing[1],
                         spec.domain.min.z + k * spacing[2]};
                if (spec.jitter > 0.0) {
                    p.x += jitter_offset(spec.seed, index, 0, spec.jitter) * spacing[0];
                    p.y += jitter_offset(spec.seed, index, 1, spec.jitter) * spacing[1];
                    p.z += jitter_offset(spec.seed, index, 2, spec.jitter) * spacing[2];
                }
                mesh.points.push_back({p, static_cast<RecordId>(index)});
            }
        }
    }

    const auto node_at = [&](int i, int j, int k) -> const Point3& {
        return mesh.points[static_cast<std::size_t>(i) +
                           static_cast<std::size_t>(spec.nx) *
                               (static_cast<std::size_t>(j) +
                                static_cast<std::size_t>(spec.ny) * static_cast<std::size_t>(k))]
            .point;
    };

    mesh.elements.reserve(spec.element_count());
    std::size_t element_index = 0;
    for (int k = 0; k + 1 < spec.nz; ++k) {
        for (int j = 0; j + 1 < spec.ny; ++j) {
            for (int i = 0; i + 1 < spec.nx; ++i, ++element_index) {
                Aabb bounds{node_at(i, j, k), node_at(i, j, k)};
                for (int corner = 1; corner < 8; ++corner) {
                    expand_to_include(bounds, node_at(i + (corner & 1), j + ((corner >> 1) & 1),
                                                      k + ((corner >> 2) & 1)));
                }
                mesh.elements.push_back({bounds, static_cast<RecordId>(element_index)});
            }
        }
    }
    return mesh;
}

namespace {

struct CellBlock {
    std::array<int, 3> lo{};
    std::array<int, 3> hi{};  // exclusive
};

/// Splits `workers` over the block by cutting the axis with the most cells,
/// placing the cut so both halves can host their share proportionally.
void bisect(const CellBlock& block, int workers, std::vector<CellBlock>& out) {
    if (workers == 1) {
        out.push_back(block);
        return;
    }
    const int w_lo = workers / 2;
    const int w_hi = workers - w_lo;

    int axis = 0;
    for (int a = 1; a < 3; ++a) {
        if (block.hi[a] - block.lo[a] > block.hi[axis] - block.lo[axis]) axis = a;
    }
    const long long cells_axis = block.hi[axis] - block.lo[axis];
    long long other = 1;
    for (int a = 0; a < 3; ++a) {
        if (a != axis) other *= block.hi[a] - block.lo[a];
    }

    long long cut = block.lo[axis] + (cells_axis * w_lo + workers / 2) / workers;
    const long long cut_min = block.lo[axis] + (w_lo + other - 1) / other;
    const long long cut_max = block.hi[axis] - (w_hi + other - 1) / other;
    cut = std::clamp(cut, cut_min, cut_max);
    if (cut <= block.lo[axis] || cut >= block.hi[axis] || cut_min > cut_max) {
        throw std::invalid_argument("decompose: cannot split cell grid across workers");
    }

    CellBlock lo_block = block;
    lo_block.hi[axis] = static_cast<int>(cut);
    CellBlock hi_block = block;
    hi_block.lo[axis] = static_cast<int>(cut);
    bisect(lo_block, w_lo, out);
    bisect(hi_block, w_hi, out);
}

}  // namespace

std::vector<WorkerSubset> decompose(const Mesh& mesh, int workers) {
    if (workers < 1) throw std::invalid_argument("decompose: workers must be >= 1");
    if (static_cast<std::size_t>(workers) > mesh.elements.size()) {
        throw std::invalid_argument("decompose: more workers than elements");
    }

    const MeshSpec& spec = mesh.spec;
    std::vector<CellBlock> blocks;
    blocks.reserve(static_cast<std::size_t>(workers));
    bisect(CellBlock{{0, 0, 0}, {spec.nx - 1, spec.ny - 1, spec.nz - 1}}, workers, blocks);

    const auto node_index = [&](int i, int j, int k) {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(spec.nx) *
                   (static_cast<std::size_t>(j) +
                    static_cast<std::size_t>(spec.ny) * static_cast<std::size_t>(k));
    };
    const auto element_index = [&](int i, int j, int k) {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(spec.nx - 1) *
                   (static_cast<std::size_t>(j) +
                    static_cast<std::size_t>(spec.ny - 1) * static_cast<std::size_t>(k));
    };

    std::vector<WorkerSubset> subsets;
    subsets.reserve(blocks.size());
    for (std::size_t w = 0; w < blocks.size(); ++w) {
        const CellBlock& block = blocks[w];
        WorkerSubset subset;
        subset.worker_id = static_cast<int>(w);
        subset.cell_lo = block.lo;
        subset.cell_hi = block.hi;

        // Nodes of the block's cells: the cell range extended by one on the
        // high side. Boundary nodes land in every touching block.
        RecordId next_point = 0;
        for (int k = block.lo[2]; k <= block.hi[2]; ++k) {
            for (int j = block.lo[1]; j <= block.hi[1]; ++j) {
                for (int i = block.lo[0]; i <= block.hi[0]; ++i) {
                    subset.points.push_back({mesh.points[node_index(i, j, k)].point, next_point++});
                }
            }
        }
        RecordId next_element = 0;
        for (int k = block.lo[2]; k < block.hi[2]; ++k) {
            for (int j = block.lo[1]; j < block.hi[1]; ++j) {
                for (int i = block.lo[0]; i < block.hi[0]; ++i) {
                    subset.elements.push_back(
                        {mesh.elements[element_index(i, j, k)].bounds, next_element++});
                }
            }
        }
        subsets.push_back(std::move(subset));
    }
    return subsets;
}

}  // namespace rangebench
