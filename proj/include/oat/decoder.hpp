// SPDX-License-Identifier: Apache-2.0
#pragma once

// Geometric decoding of token streams: each leaf carries a local plane
// (recovered minimizer + mean normal); a query point is labeled against the
// plane of its containing leaf, falling back to the nearest leaf center in
// empty space. Meshes come out of marching cubes over the binary field.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "oat/kdtree.hpp"
#include "oat/mesh.hpp"
#include "oat/tokenizer.hpp"

namespace oat {

struct DecodedLeaf {
    Vec3 center;
    double half_extent = 0.5;
    Vec3 plane_point;  // recovered minimizer in global coordinates
    Vec3 normal;       // unit, outward
    bool degenerate = false;  // pre-normalization norm < 1e-8; excluded from queries
};

// One decoded plane per leaf of the structure, from per-node latents.
std::vector<DecodedLeaf> leaves_from_latents(const AdaptiveOctree& structure,
                                             const std::vector<Latent8>& phi);

// Full decode chain: verify the codebook hash, rebuild the structure from
// the chi stream, accumulate residuals, extract leaf planes. Throws
// CompatError on hash mismatch.
std::vector<DecodedLeaf> decode_leaves(const TokenSequence& tokens, const Codebook& codebook);

// Query index over decoded leaves. Containing-leaf lookup is a hash of the
// quantized cell coordinates per populated depth; empty space falls back to
// the nearest non-degenerate leaf center (kd-tree).
class DecodedField {
  public:
    explicit DecodedField(std::vector<DecodedLeaf> leaves);  // throws EmptyResultError if no usable leaf

    bool occupied(const Vec3& x) const;
    const std::vector<DecodedLeaf>& leaves() const { return leaves_; }

  private:
    std::vector<DecodedLeaf> leaves_;
    std::vector<uint32_t> usable_;
    std::unordered_map<uint64_t, uint32_t> cell_lookup_;
    std::vector<int> depths_;  // distinct depths among usable leaves
    KdTree3 centers_;
};

inline int decode_occupancy(const Vec3& x, const DecodedField& field) {
    return field.occupied(x) ? 1 : 0;
}

struct OccupancyGrid {
    uint32_t resolution = 0;
    std::vector<uint8_t> values;  // R^3 entries, x fastest: index = (z*R + y)*R + x

    size_t index(uint32_t x, uint32_t y, uint32_t z) const {
        return (size_t(z) * resolution + y) * resolution + x;
    }
    uint8_t at(uint32_t x, uint32_t y, uint32_t z) const { return values[index(x, y, z)]; }
    Vec3 world(uint32_t x, uint32_t y, uint32_t z) const {
        double r = resolution;
        return {(x + 0.5) / r, (y + 0.5) / r, (z + 0.5) / r};
    }
    size_t count_occupied() const;
};

// Evaluates the decoded field at all R^3 cell centers.
OccupancyGrid occupancy_grid(const DecodedField& field, uint32_t resolution);

// Ground-truth grid from the winding-number oracle.
OccupancyGrid oracle_occupancy_grid(const TriangleMesh& mesh, uint32_t resolution);

// Marching cubes at isovalue 0.5 over the binary field; vertices sit on
// grid-edge midpoints. Throws EmptyResultError on a uniform grid.
TriangleMesh extract_mesh(const OccupancyGrid& grid);

// "OATG": u32 R, then R^3 occupancy bits packed little-endian (x fastest).
void write_grid(const OccupancyGrid& grid, const std::string& path);
OccupancyGrid read_grid(const std::string& path);

}  // namespace oat
