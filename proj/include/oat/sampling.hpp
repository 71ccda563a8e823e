// SPDX-License-Identifier: Apache-2.0
#pragma once

// Oriented surface sampling and occupancy query generation. Point data is
// stored as structure-of-arrays float spans so the hot kernels can stream it.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "oat/math.hpp"
#include "oat/mesh.hpp"

namespace oat {

struct OrientedPointCloud {
    std::vector<float> px, py, pz;  // positions in [0,1]^3
    std::vector<float> nx, ny, nz;  // unit normals

    size_t size() const { return px.size(); }
    bool empty() const { return px.empty(); }
    Vec3 position(size_t i) const { return {px[i], py[i], pz[i]}; }
    Vec3 normal(size_t i) const { return {nx[i], ny[i], nz[i]}; }
    void push(const Vec3& p, const Vec3& n) {
        px.push_back(float(p.x)); py.push_back(float(p.y)); pz.push_back(float(p.z));
        nx.push_back(float(n.x)); ny.push_back(float(n.y)); nz.push_back(float(n.z));
    }
    void resize(size_t n) {
        px.resize(n); py.resize(n); pz.resize(n);
        nx.resize(n); ny.resize(n); nz.resize(n);
    }
};

struct QuerySet {
    std::vector<std::array<float, 3>> points;
    std::vector<uint8_t> occupancy;
};

// Area-weighted surface sampling with face normals. Deterministic: point i
// depends only on (seed, i). Degenerate faces carry zero weight.
OrientedPointCloud sample_surface(const TriangleMesh& mesh, size_t n, uint64_t seed);

// n_uniform points uniform in [0,1]^3 plus n_near surface samples offset by
// isotropic Gaussian noise (std sigma) and clamped to [0,1]^3, each labeled
// by the winding-number occupancy oracle.
QuerySet sample_queries(const TriangleMesh& mesh, size_t n_uniform, size_t n_near,
                        double sigma, uint64_t seed);

// "OATP": u32 count, then per point 6 x f32 little-endian (position, normal).
void write_point_cloud(const OrientedPointCloud& cloud, const std::string& path);
OrientedPointCloud read_point_cloud(const std::string& path);

}  // namespace oat
