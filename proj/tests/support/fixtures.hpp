// SPDX-License-Identifier: Apache-2.0
#pragma once

// Procedural test fixtures, all constructed directly in unit-cube
// coordinates: cube [0.25,0.75]^3, sphere r=0.4, torus R=0.3/r=0.12, a flat
// sheet at z=0.5, and a faceted icosahedron. Closed fixtures are watertight.

#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "oat/mesh.hpp"

namespace oat::fixtures {

inline TriangleMesh box(const Vec3& lo, const Vec3& hi) {
    TriangleMesh m;
    m.vertices = {{lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z}, {lo.x, hi.y, lo.z},
                  {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z}};
    // 12 triangles, outward winding
    m.faces = {{0, 2, 1}, {0, 3, 2},   // z = lo
               {4, 5, 6}, {4, 6, 7},   // z = hi
               {0, 1, 5}, {0, 5, 4},   // y = lo
               {3, 6, 2}, {3, 7, 6},   // y = hi
               {0, 4, 7}, {0, 7, 3},   // x = lo
               {1, 2, 6}, {1, 6, 5}};  // x = hi
    return m;
}

inline TriangleMesh cube() { return box({0.25, 0.25, 0.25}, {0.75, 0.75, 0.75}); }

// Icosphere: subdivided icosahedron projected to the sphere.
inline TriangleMesh sphere(double radius = 0.4, int subdivisions = 3,
                           const Vec3& center = {0.5, 0.5, 0.5}) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    for (Vec3& v : verts) v = normalized(v);
    std::vector<std::array<uint32_t, 3>> faces = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
    for (int s = 0; s < subdivisions; ++s) {
        std::map<uint64_t, uint32_t> midpoint;
        auto mid = [&](uint32_t a, uint32_t b) -> uint32_t {
            uint64_t key = (uint64_t(std::min(a, b)) << 32) | std::max(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = normalized((verts[a] + verts[b]) * 0.5);
            verts.push_back(m);
            uint32_t idx = uint32_t(verts.size() - 1);
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<uint32_t, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            uint32_t ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    TriangleMesh m;
    m.faces = std::move(faces);
    m.vertices.reserve(verts.size());
    for (const Vec3& v : verts) m.vertices.push_back(center + v * radius);
    return m;
}

inline TriangleMesh torus(double major = 0.3, double minor = 0.12, int n_major = 48,
                          int n_minor = 24, const Vec3& center = {0.5, 0.5, 0.5}) {
    TriangleMesh m;
    const double tau = 6.283185307179586476925286766559;
    for (int i = 0; i < n_major; ++i) {
        double u = tau * i / n_major;
        Vec3 ring{std::cos(u), std::sin(u), 0.0};
        for (int j = 0; j < n_minor; ++j) {
            double v = tau * j / n_minor;
            Vec3 p = center + ring * (major + minor * std::cos(v)) +
                     Vec3{0, 0, minor * std::sin(v)};
            m.vertices.push_back(p);
        }
    }
    auto vid = [&](int i, int j) {
        return uint32_t((i % n_major) * n_minor + (j % n_minor));
    };
    for (int i = 0; i < n_major; ++i) {
        for (int j = 0; j < n_minor; ++j) {
            uint32_t a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
            m.faces.push_back({a, b, c});
            m.faces.push_back({a, c, d});
        }
    }
    return m;
}

// Open sheet at z = 0.5 spanning [0,1]^2, normals up.
inline TriangleMesh plane_sheet(int divisions = 8) {
    TriangleMesh m;
    int n = divisions + 1;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            m.vertices.push_back({double(i) / divisions, double(j) / divisions, 0.5});
    auto vid = [&](int i, int j) { return uint32_t(j * n + i); };
    for (int j = 0; j < divisions; ++j) {
        for (int i = 0; i < divisions; ++i) {
            m.faces.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            m.faces.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    }
    return m;
}

inline TriangleMesh icosahedron(double radius = 0.4, const Vec3& center = {0.5, 0.5, 0.5}) {
    return sphere(radius, 0, center);
}

inline std::string write_temp_obj(const TriangleMesh& mesh, const std::string& name) {
    std::string path = "/tmp/oat_fixture_" + name + ".obj";
    save_obj(mesh, path);
    return path;
}

}  // namespace oat::fixtures
