// SPDX-License-Identifier: Apache-2.0
#pragma once

// Complexity-driven sparse octree. Cells subdivide only while the average
// quadric error of their points exceeds a threshold and the maximum depth is
// not reached, so flat regions terminate early and complex regions refine.
// Structure round-trips through one child-mask byte per node in BFS order.

#include <cstdint>
#include <string>
#include <vector>

#include "oat/math.hpp"
#include "oat/sampling.hpp"

namespace oat {

// Child slot convention: slot = 1 + 4*dx + 2*dy + dz with dx/dy/dz selecting
// the upper half of the cell per axis. Mask bits are MSB-first: slot k
// occupies bit (8-k), so slots {2,5} encode to 0x48.
inline uint8_t slot_bit(int slot) { return uint8_t(1u << (8 - slot)); }

struct OctreeCell {
    Vec3 center;
    uint32_t point_begin = 0;   // range into the cell-sorted point permutation
    uint32_t point_end = 0;
    int32_t parent = -1;        // node index; -1 for the root
    uint32_t first_child = 0;   // children are BFS-contiguous
    double e_star = 0.0;        // cached average quadric error
    uint8_t child_mask = 0;     // chi; 0 iff leaf
    uint8_t depth = 0;

    bool is_leaf() const { return child_mask == 0; }
    size_t point_count() const { return point_end - point_begin; }
    double half_extent() const { return std::ldexp(1.0, -int(depth) - 1); }
    Vec3 lo() const { double h = half_extent(); return {center.x - h, center.y - h, center.z - h}; }
    bool contains(const Vec3& x) const;  // half-open bounds, global 1.0 inclusive
};

struct AdaptiveOctree {
    std::vector<OctreeCell> nodes;  // BFS order; nodes[0] is the root
    int max_depth = 6;              // L
    double threshold = 0.0;         // T
    OrientedPointCloud points;      // cell-sorted copy of the source cloud
    std::vector<uint32_t> point_permutation;  // points[i] == source[perm[i]]

    size_t node_count() const { return nodes.size(); }
    size_t leaf_count() const;
    // index of the child of `node` at `slot`, or -1 when absent
    int32_t child_at(size_t node, int slot) const;
};

struct BuildParams {
    double threshold = 5e-4;   // T
    int max_depth = 6;         // L
    size_t min_points = 4;     // cells with fewer points never subdivide
};

// Slot of x inside the cell (1..8). Throws InputError when x is outside.
int child_slot(const OctreeCell& cell, const Vec3& x);

// Builds the adaptive tree: subdivide while depth < L, the cell holds at
// least min_points points, and the cached cell error exceeds T.
AdaptiveOctree build_adaptive_octree(const OrientedPointCloud& cloud, const BuildParams& params);

// Ablation construction: subdivide every non-empty cell until depth L.
AdaptiveOctree build_occupancy_octree(const OrientedPointCloud& cloud, int max_depth);

// One mask byte per node in BFS order.
std::vector<uint8_t> serialize_structure(const AdaptiveOctree& tree);

// Rebuilds nodes, parent links, centers and depths from a BFS mask stream.
// The result carries no points and no cached errors. Throws InputError on
// truncated/overlong streams (with byte index) and on a nonzero mask at
// depth L.
AdaptiveOctree deserialize_structure(const std::vector<uint8_t>& bytes, int max_depth);

// Drops BFS-tail leaves until node_count <= max_nodes; parents losing all
// children become leaves. The result is a prefix-closed subtree.
AdaptiveOctree trim_to_budget(const AdaptiveOctree& tree, size_t max_nodes);

struct TreePe {
    int x = 0, y = 0, z = 0, d = 0;
};

// Quantized cell-center coordinates at resolution 2^L plus node depth.
TreePe tree_pe_indices(const OctreeCell& cell, int max_depth);

// "OATS": u8 version=1, u8 L, u32 node_count, then the mask bytes.
void write_structure(const AdaptiveOctree& tree, const std::string& path);
AdaptiveOctree read_structure(const std::string& path);

}  // namespace oat
