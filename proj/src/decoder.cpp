// SPDX-License-Identifier: Apache-2.0

#include "oat/decoder.hpp"

#include <algorithm>
#include <cmath>

#include "oat/error.hpp"
#include "oat/io.hpp"
#include "oat/mc_tables.hpp"
#include "oat/winding.hpp"

namespace oat {

namespace {

constexpr double kDegenerateNormal = 1e-8;

DecodedLeaf make_leaf(const OctreeCell& cell, const Latent8& phi) {
    DecodedLeaf leaf;
    leaf.center = cell.center;
    leaf.half_extent = cell.half_extent();
    double size = 2.0 * leaf.half_extent;
    Vec3 lo = cell.lo();
    leaf.plane_point = {lo.x + phi[0] * size, lo.y + phi[1] * size, lo.z + phi[2] * size};
    Vec3 n{phi[3], phi[4], phi[5]};
    double len = norm(n);
    if (len < kDegenerateNormal) {
        leaf.degenerate = true;
        leaf.normal = {0, 0, 0};
    } else {
        leaf.normal = n / len;
    }
    return leaf;
}

uint64_t cell_key(int depth, uint32_t ix, uint32_t iy, uint32_t iz) {
    return (uint64_t(depth) << 48) | (uint64_t(ix) << 32) | (uint64_t(iy) << 16) | iz;
}

}  // namespace

std::vector<DecodedLeaf> leaves_from_latents(const AdaptiveOctree& structure,
                                             const std::vector<Latent8>& phi) {
    if (phi.size() != structure.nodes.size())
        throw InputError("leaves_from_latents: latent count does not match node count");
    std::vector<DecodedLeaf> leaves;
    for (size_t i = 0; i < structure.nodes.size(); ++i)
        if (structure.nodes[i].is_leaf()) leaves.push_back(make_leaf(structure.nodes[i], phi[i]));
    return leaves;
}

std::vector<DecodedLeaf> decode_leaves(const TokenSequence& tokens, const Codebook& codebook) {
    if (tokens.header.codebook_hash != codebook.hash())
        throw CompatError("decode: token stream was produced with a different codebook");
    AdaptiveOctree structure = deserialize_structure(tokens.chi, tokens.header.max_depth);
    std::vector<Latent8> z(tokens.size());
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (tokens.q[i] >= codebook.size())
            throw CompatError("decode: codebook index out of range");
        z[i] = codebook.entries[tokens.q[i]];
    }
    std::vector<Latent8> phi_hat = accumulate_latents(structure, z);
    return leaves_from_latents(structure, phi_hat);
}

DecodedField::DecodedField(std::vector<DecodedLeaf> leaves) : leaves_(std::move(leaves)) {
    std::vector<float> cx, cy, cz;
    for (uint32_t i = 0; i < leaves_.size(); ++i) {
        const DecodedLeaf& l = leaves_[i];
        if (l.degenerate) continue;
        usable_.push_back(i);
        cx.push_back(float(l.center.x));
        cy.push_back(float(l.center.y));
        cz.push_back(float(l.center.z));
        int depth = int(std::lround(-std::log2(2.0 * l.half_extent)));
        double r = std::ldexp(1.0, depth);
        uint32_t ix = uint32_t(l.center.x * r);
        uint32_t iy = uint32_t(l.center.y * r);
        uint32_t iz = uint32_t(l.center.z * r);
        cell_lookup_[cell_key(depth, ix, iy, iz)] = i;
        if (std::find(depths_.begin(), depths_.end(), depth) == depths_.end())
            depths_.push_back(depth);
    }
    if (usable_.empty())
        throw EmptyResultError("decode: no usable leaves (all normals degenerate)");
    std::sort(depths_.begin(), depths_.end());
    centers_ = KdTree3(std::move(cx), std::move(cy), std::move(cz));
}

bool DecodedField::occupied(const Vec3& x) const {
    const DecodedLeaf* leaf = nullptr;
    for (int depth : depths_) {
        double r = std::ldexp(1.0, depth);
        auto quant = [&](double v) {
            double q = std::floor(v * r);
            return uint32_t(std::min(std::max(q, 0.0), r - 1.0));
        };
        auto it = cell_lookup_.find(cell_key(depth, quant(x.x), quant(x.y), quant(x.z)));
        if (it != cell_lookup_.end()) {
            leaf = &leaves_[it->second];
            break;
        }
    }
    if (!leaf) leaf = &leaves_[usable_[centers_.nearest(float(x.x), float(x.y), float(x.z))]];
    return dot(leaf->normal, x - leaf->plane_point) <= 0.0;
}

size_t OccupancyGrid::count_occupied() const {
    size_t n = 0;
    for (uint8_t v : values) n += v;
    return n;
}

OccupancyGrid occupancy_grid(const DecodedField& field, uint32_t resolution) {
    if (resolution < 8) throw InputError("occupancy_grid: resolution must be >= 8");
    OccupancyGrid grid;
    grid.resolution = resolution;
    grid.values.resize(size_t(resolution) * resolution * resolution);
    size_t at = 0;
    for (uint32_t z = 0; z < resolution; ++z)
        for (uint32_t y = 0; y < resolution; ++y)
            for (uint32_t x = 0; x < resolution; ++x)
                grid.values[at++] = field.occupied(grid.world(x, y, z)) ? 1 : 0;
    return grid;
}

OccupancyGrid oracle_occupancy_grid(const TriangleMesh& mesh, uint32_t resolution) {
    if (resolution < 8) throw InputError("oracle_occupancy_grid: resolution must be >= 8");
    WindingEvaluator we(mesh);
    OccupancyGrid grid;
    grid.resolution = resolution;
    grid.values.resize(size_t(resolution) * resolution * resolution);
    size_t at = 0;
    for (uint32_t z = 0; z < resolution; ++z)
        for (uint32_t y = 0; y < resolution; ++y)
            for (uint32_t x = 0; x < resolution; ++x)
                grid.values[at++] = we.inside(grid.world(x, y, z)) ? 1 : 0;
    return grid;
}

TriangleMesh extract_mesh(const OccupancyGrid& grid) {
    const uint32_t r = grid.resolution;
    size_t occupied = grid.count_occupied();
    if (occupied == 0 || occupied == grid.values.size())
        throw EmptyResultError("extract_mesh: empty surface (uniform occupancy grid)");

    TriangleMesh mesh;
    std::unordered_map<uint64_t, uint32_t> edge_vertex;
    edge_vertex.reserve(occupied * 4);

    // Vertex on the axis-aligned lattice edge starting at (x,y,z): binary
    // field, so always the midpoint.
    auto edge_vert = [&](uint32_t x, uint32_t y, uint32_t z, int axis) -> uint32_t {
        uint64_t key = ((uint64_t(axis) * r + z) * r + y) * r + x;
        auto it = edge_vertex.find(key);
        if (it != edge_vertex.end()) return it->second;
        Vec3 a = grid.world(x, y, z);
        Vec3 b = a;
        if (axis == 0) b.x += 1.0 / r;
        if (axis == 1) b.y += 1.0 / r;
        if (axis == 2) b.z += 1.0 / r;
        uint32_t idx = uint32_t(mesh.vertices.size());
        mesh.vertices.push_back((a + b) * 0.5);
        edge_vertex.emplace(key, idx);
        return idx;
    };

    for (uint32_t z = 0; z + 1 < r; ++z) {
        for (uint32_t y = 0; y + 1 < r; ++y) {
            for (uint32_t x = 0; x + 1 < r; ++x) {
                int cube = 0;
                for (int c = 0; c < 8; ++c) {
                    if (grid.at(x + kMcCornerOffset[c][0], y + kMcCornerOffset[c][1],
                                z + kMcCornerOffset[c][2]))
                        cube |= 1 << c;
                }
                if (kMcEdgeTable[cube] == 0) continue;
                uint32_t ev[12];
                for (int e = 0; e < 12; ++e) {
                    if (!(kMcEdgeTable[cube] & (1 << e))) continue;
                    int ca = kMcEdgeVerts[e][0];
                    int cb = kMcEdgeVerts[e][1];
                    uint32_t axv[3] = {x + uint32_t(kMcCornerOffset[ca][0]),
                                       y + uint32_t(kMcCornerOffset[ca][1]),
                                       z + uint32_t(kMcCornerOffset[ca][2])};
                    uint32_t bxv[3] = {x + uint32_t(kMcCornerOffset[cb][0]),
                                       y + uint32_t(kMcCornerOffset[cb][1]),
                                       z + uint32_t(kMcCornerOffset[cb][2])};
                    int axis = axv[0] != bxv[0] ? 0 : (axv[1] != bxv[1] ? 1 : 2);
                    uint32_t ox = std::min(axv[0], bxv[0]);
                    uint32_t oy = std::min(axv[1], bxv[1]);
                    uint32_t oz = std::min(axv[2], bxv[2]);
                    ev[e] = edge_vert(ox, oy, oz, axis);
                }
                const int* row = kMcTriTable[cube];
                for (int t = 0; row[t] != -1; t += 3) {
                    // reversed order: the table is oriented for fields where
                    // low values are inside; our occupied corners set bits
                    mesh.faces.push_back({ev[row[t]], ev[row[t + 2]], ev[row[t + 1]]});
                }
            }
        }
    }
    return mesh;
}

void write_grid(const OccupancyGrid& grid, const std::string& path) {
    io::Writer w(path);
    w.magic("OATG");
    w.pod<uint32_t>(grid.resolution);
    std::vector<uint8_t> packed((grid.values.size() + 7) / 8, 0);
    for (size_t i = 0; i < grid.values.size(); ++i)
        if (grid.values[i]) packed[i >> 3] |= uint8_t(1u << (i & 7));
    w.bytes(packed.data(), packed.size());
    w.close();
}

OccupancyGrid read_grid(const std::string& path) {
    io::Reader r(path);
    r.expect_magic("OATG", "occupancy grid");
    OccupancyGrid grid;
    grid.resolution = r.pod<uint32_t>();
    size_t n = size_t(grid.resolution) * grid.resolution * grid.resolution;
    std::vector<uint8_t> packed((n + 7) / 8);
    r.bytes(packed.data(), packed.size());
    grid.values.resize(n);
    for (size_t i = 0; i < n; ++i) grid.values[i] = (packed[i >> 3] >> (i & 7)) & 1;
    return grid;
}

}  // namespace oat
