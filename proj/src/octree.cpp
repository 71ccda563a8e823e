// SPDX-License-Identifier: Apache-2.0

#include "oat/octree.hpp"

#include <bit>
#include <cmath>

#include "oat/error.hpp"
#include "oat/io.hpp"
#include "oat/quadric.hpp"

namespace oat {

bool OctreeCell::contains(const Vec3& x) const {
    double h = half_extent();
    for (int a = 0; a < 3; ++a) {
        double lo = center[a] - h, hi = center[a] + h;
        bool upper_ok = x[a] < hi || (hi >= 1.0 && x[a] == 1.0);
        if (x[a] < lo || !upper_ok) return false;
    }
    return true;
}

size_t AdaptiveOctree::leaf_count() const {
    size_t n = 0;
    for (const auto& c : nodes) n += c.is_leaf();
    return n;
}

int32_t AdaptiveOctree::child_at(size_t node, int slot) const {
    const OctreeCell& c = nodes[node];
    uint8_t bit = slot_bit(slot);
    if (!(c.child_mask & bit)) return -1;
    // children are stored in slot order; rank = set bits before this slot
    uint8_t before = uint8_t(c.child_mask & ~(bit - 1) & ~bit);
    return int32_t(c.first_child + std::popcount(before));
}

int child_slot(const OctreeCell& cell, const Vec3& x) {
    if (!cell.contains(x)) throw InputError("child_slot: point outside cell");
    int dx = x.x >= cell.center.x;
    int dy = x.y >= cell.center.y;
    int dz = x.z >= cell.center.z;
    return 1 + 4 * dx + 2 * dy + dz;
}

namespace {

Vec3 child_center(const OctreeCell& cell, int slot) {
    double q = cell.half_extent() * 0.5;
    int s = slot - 1;
    return {cell.center.x + ((s & 4) ? q : -q),
            cell.center.y + ((s & 2) ? q : -q),
            cell.center.z + ((s & 1) ? q : -q)};
}

struct Scratch {
    std::vector<float> px, py, pz, nx, ny, nz;
    std::vector<uint32_t> perm;
    std::vector<uint8_t> slots;
};

AdaptiveOctree build_octree(const OrientedPointCloud& cloud, const BuildParams& params,
                            bool occupancy_only) {
    if (cloud.empty()) throw InputError("octree build: empty point cloud");
    if (params.max_depth < 1 || params.max_depth > 10)
        throw InputError("octree build: max depth must be in [1, 10]");
    if (!occupancy_only && params.threshold <= 0.0)
        throw InputError("octree build: threshold must be > 0");
    const size_t n = cloud.size();
    for (size_t i = 0; i < n; ++i) {
        if (cloud.px[i] < 0.f || cloud.px[i] > 1.f || cloud.py[i] < 0.f || cloud.py[i] > 1.f ||
            cloud.pz[i] < 0.f || cloud.pz[i] > 1.f)
            throw InputError("octree build: point outside the unit cube");
    }

    AdaptiveOctree tree;
    tree.max_depth = params.max_depth;
    tree.threshold = params.threshold;
    tree.points = cloud;
    tree.point_permutation.resize(n);
    for (size_t i = 0; i < n; ++i) tree.point_permutation[i] = uint32_t(i);

    OctreeCell root;
    root.center = {0.5, 0.5, 0.5};
    root.point_begin = 0;
    root.point_end = uint32_t(n);
    tree.nodes.push_back(root);

    Scratch s;
    s.px.resize(n); s.py.resize(n); s.pz.resize(n);
    s.nx.resize(n); s.ny.resize(n); s.nz.resize(n);
    s.perm.resize(n);
    s.slots.resize(n);

    auto& pts = tree.points;

    // vector-as-queue BFS: children append behind their parents
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
        OctreeCell cell = tree.nodes[i];  // copy: vector may reallocate below
        uint32_t b = cell.point_begin, e = cell.point_end;
        uint32_t count = e - b;

        Vec3 centroid;
        Quadric q = quadric_from_points(pts.px.data() + b, pts.py.data() + b,
                                        pts.pz.data() + b, pts.nx.data() + b,
                                        pts.ny.data() + b, pts.nz.data() + b, count, &centroid);
        QuadricMin qm = quadric_minimize(q, centroid, tikhonov_epsilon(q));
        tree.nodes[i].e_star = qm.e_star / double(count);

        bool subdivide;
        if (occupancy_only) {
            subdivide = cell.depth < params.max_depth && count >= 1;
        } else {
            subdivide = cell.depth < params.max_depth && count >= params.min_points &&
                        tree.nodes[i].e_star > params.threshold;
        }
        if (!subdivide) continue;

        // stable 8-way partition of the cell's span by child slot
        uint32_t counts[8] = {0};
        for (uint32_t k = b; k < e; ++k) {
            Vec3 p = pts.position(k);
            int dx = p.x >= cell.center.x;
            int dy = p.y >= cell.center.y;
            int dz = p.z >= cell.center.z;
            uint8_t slot = uint8_t(4 * dx + 2 * dy + dz);  // 0-based here
            s.slots[k] = slot;
            ++counts[slot];
        }
        uint32_t offsets[8];
        uint32_t acc = b;
        for (int c = 0; c < 8; ++c) {
            offsets[c] = acc;
            acc += counts[c];
        }
        uint32_t cursor[8];
        for (int c = 0; c < 8; ++c) cursor[c] = offsets[c];
        for (uint32_t k = b; k < e; ++k) {
            uint32_t dst = cursor[s.slots[k]]++;
            s.px[dst] = pts.px[k]; s.py[dst] = pts.py[k]; s.pz[dst] = pts.pz[k];
            s.nx[dst] = pts.nx[k]; s.ny[dst] = pts.ny[k]; s.nz[dst] = pts.nz[k];
            s.perm[dst] = tree.point_permutation[k];
        }
        for (uint32_t k = b; k < e; ++k) {
            pts.px[k] = s.px[k]; pts.py[k] = s.py[k]; pts.pz[k] = s.pz[k];
            pts.nx[k] = s.nx[k]; pts.ny[k] = s.ny[k]; pts.nz[k] = s.nz[k];
            tree.point_permutation[k] = s.perm[k];
        }

        tree.nodes[i].first_child = uint32_t(tree.nodes.size());
        for (int c = 0; c < 8; ++c) {
            if (counts[c] == 0) continue;
            int slot = c + 1;
            tree.nodes[i].child_mask |= slot_bit(slot);
            OctreeCell child;
            child.center = child_center(cell, slot);
            child.depth = uint8_t(cell.depth + 1);
            child.parent = int32_t(i);
            child.point_begin = offsets[c];
            child.point_end = offsets[c] + counts[c];
            tree.nodes.push_back(child);
        }
    }
    return tree;
}

}  // namespace

AdaptiveOctree build_adaptive_octree(const OrientedPointCloud& cloud, const BuildParams& params) {
    return build_octree(cloud, params, false);
}

AdaptiveOctree build_occupancy_octree(const OrientedPointCloud& cloud, int max_depth) {
    BuildParams p;
    p.max_depth = max_depth;
    p.threshold = 1.0;  // unused in occupancy mode
    return build_octree(cloud, p, true);
}

std::vector<uint8_t> serialize_structure(const AdaptiveOctree& tree) {
    std::vector<uint8_t> bytes;
    bytes.reserve(tree.nodes.size());
    for (const auto& c : tree.nodes) bytes.push_back(c.child_mask);
    return bytes;
}

AdaptiveOctree deserialize_structure(const std::vector<uint8_t>& bytes, int max_depth) {
    if (max_depth < 1 || max_depth > 10)
        throw InputError("deserialize: max depth must be in [1, 10]");
    AdaptiveOctree tree;
    tree.max_depth = max_depth;

    OctreeCell root;
    root.center = {0.5, 0.5, 0.5};
    tree.nodes.push_back(root);

    size_t idx = 0;
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
        if (idx >= bytes.size())
            throw InputError("deserialize: stream too short at byte index " +
                             std::to_string(idx));
        uint8_t mask = bytes[idx++];
        OctreeCell cell = tree.nodes[i];
        if (cell.depth == max_depth && mask != 0)
            throw InputError("deserialize: nonzero child mask at max depth (byte index " +
                             std::to_string(idx - 1) + ")");
        tree.nodes[i].child_mask = mask;
        tree.nodes[i].first_child = uint32_t(tree.nodes.size());
        for (int slot = 1; slot <= 8; ++slot) {
            if (!(mask & slot_bit(slot))) continue;
            OctreeCell child;
            child.center = child_center(cell, slot);
            child.depth = uint8_t(cell.depth + 1);
            child.parent = int32_t(i);
            tree.nodes.push_back(child);
        }
    }
    if (idx != bytes.size())
        throw InputError("deserialize: trailing data at byte index " + std::to_string(idx));
    return tree;
}

AdaptiveOctree trim_to_budget(const AdaptiveOctree& tree, size_t max_nodes) {
    if (max_nodes < 1) throw InputError("trim_to_budget: max_nodes must be >= 1");
    if (tree.nodes.size() <= max_nodes) return tree;
    // Dropping the BFS tail node by node always removes a leaf (a node's
    // children sit behind it), so the trimmed tree is exactly a BFS prefix.
    AdaptiveOctree out;
    out.max_depth = tree.max_depth;
    out.threshold = tree.threshold;
    out.points = tree.points;
    out.point_permutation = tree.point_permutation;
    out.nodes.assign(tree.nodes.begin(), tree.nodes.begin() + long(max_nodes));
    for (size_t i = 0; i < out.nodes.size(); ++i) {
        OctreeCell& c = out.nodes[i];
        if (c.child_mask == 0) continue;
        uint8_t kept = 0;
        uint32_t child = c.first_child;
        for (int slot = 1; slot <= 8; ++slot) {
            if (!(c.child_mask & slot_bit(slot))) continue;
            if (child < max_nodes) kept |= slot_bit(slot);
            ++child;
        }
        c.child_mask = kept;
        if (kept == 0) c.first_child = 0;
    }
    return out;
}

TreePe tree_pe_indices(const OctreeCell& cell, int max_depth) {
    double r = std::ldexp(1.0, max_depth);  // 2^L
    TreePe pe;
    pe.x = int(std::floor(cell.center.x * r));
    pe.y = int(std::floor(cell.center.y * r));
    pe.z = int(std::floor(cell.center.z * r));
    pe.d = cell.depth;
    return pe;
}

void write_structure(const AdaptiveOctree& tree, const std::string& path) {
    io::Writer w(path);
    w.magic("OATS");
    w.pod<uint8_t>(1);
    w.pod<uint8_t>(uint8_t(tree.max_depth));
    w.pod<uint32_t>(uint32_t(tree.nodes.size()));
    auto bytes = serialize_structure(tree);
    w.bytes(bytes.data(), bytes.size());
    w.close();
}

AdaptiveOctree read_structure(const std::string& path) {
    io::Reader r(path);
    r.expect_magic("OATS", "octree structure");
    uint8_t version = r.pod<uint8_t>();
    if (version != 1)
        throw InputError(path + ": unsupported structure version " + std::to_string(version));
    uint8_t max_depth = r.pod<uint8_t>();
    uint32_t count = r.pod<uint32_t>();
    std::vector<uint8_t> bytes(count);
    r.bytes(bytes.data(), count);
    return deserialize_structure(bytes, max_depth);
}

}  // namespace oat
