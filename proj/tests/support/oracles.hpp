// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent test oracles. Everything here recomputes expected values from
// first principles (direct plane-energy sums, grid search, gradient descent,
// random-tree generation) without touching the implementation paths under
// test.

#include <array>
#include <cstdint>
#include <vector>

#include "oat/math.hpp"
#include "oat/octree.hpp"

namespace oat::oracles {

struct Plane {
    Vec3 p;
    Vec3 n;  // unit
};

// Direct energy: sum of squared point-to-plane distances.
inline double direct_energy(const std::vector<Plane>& planes, const Vec3& x) {
    double e = 0.0;
    for (const Plane& pl : planes) {
        double d = dot(pl.n, x - pl.p);
        e += d * d;
    }
    return e;
}

struct GridMin {
    Vec3 x;
    double e;
};

// Brute-force minimization of the direct energy over an n^3 grid on a box.
inline GridMin grid_search_min(const std::vector<Plane>& planes, const Vec3& lo, const Vec3& hi,
                               int n = 64) {
    GridMin best{lo, 1e300};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                Vec3 x{lo.x + (hi.x - lo.x) * (i + 0.5) / n,
                       lo.y + (hi.y - lo.y) * (j + 0.5) / n,
                       lo.z + (hi.z - lo.z) * (k + 0.5) / n};
                double e = direct_energy(planes, x);
                if (e < best.e) best = {x, e};
            }
        }
    }
    return best;
}

// Energy bound for grid-tolerance checks: E(x*+d) - E* <= lambda_max |d|^2
// with lambda_max <= plane count for unit normals.
inline double grid_tolerance(size_t plane_count, const Vec3& lo, const Vec3& hi, int n = 64) {
    Vec3 h{(hi.x - lo.x) / n, (hi.y - lo.y) / n, (hi.z - lo.z) / n};
    double r2 = 0.25 * (h.x * h.x + h.y * h.y + h.z * h.z);
    return double(plane_count) * r2;
}

// Gradient descent on E(x) + eps*|x - t|^2; independent of the linear-solve
// path (the energy is convex, so this converges to the unique minimum).
inline Vec3 descend_regularized(const std::vector<Plane>& planes, const Vec3& t, double eps,
                                Vec3 x0, int iters = 20000) {
    Vec3 x = x0;
    double step = 0.4 / double(planes.size() + 1);
    for (int it = 0; it < iters; ++it) {
        Vec3 g{0, 0, 0};
        for (const Plane& pl : planes) g += pl.n * (2.0 * dot(pl.n, x - pl.p));
        g += (x - t) * (2.0 * eps);
        x -= g * step;
    }
    return x;
}

inline Vec3 random_unit(Rng& rng) {
    for (;;) {
        Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        double n2 = norm2(v);
        if (n2 > 1e-4 && n2 <= 1.0) return v / std::sqrt(n2);
    }
}

struct Rotation {
    // rows of the rotation matrix
    Vec3 r0, r1, r2;
    Vec3 apply(const Vec3& v) const { return {dot(r0, v), dot(r1, v), dot(r2, v)}; }
};

inline Rotation random_rotation(Rng& rng) {
    // orthonormal frame from two random directions
    Vec3 a = random_unit(rng);
    Vec3 b = random_unit(rng);
    while (std::abs(dot(a, b)) > 0.99) b = random_unit(rng);
    Vec3 w = normalized(cross(a, b));
    Vec3 u = normalized(cross(w, a));
    return {a, u, w};
}

// Random valid BFS mask stream (depth-L nodes are leaves). Generated
// directly, without going through the serializer under test.
inline std::vector<uint8_t> random_tree_bytes(Rng& rng, int max_depth, double branch = 0.5) {
    std::vector<uint8_t> bytes;
    size_t pending = 1;
    std::vector<int> depths = {0};
    for (size_t i = 0; i < pending; ++i) {
        int d = depths[i];
        uint8_t mask = 0;
        if (d < max_depth && rng.uniform() < branch)
            while (mask == 0) mask = uint8_t(rng.next_u64() & 0xFF);
        bytes.push_back(mask);
        for (int bit = 0; bit < 8; ++bit) {
            if (mask & (1u << bit)) {
                depths.push_back(d + 1);
                ++pending;
            }
        }
    }
    return bytes;
}

inline AdaptiveOctree random_tree(Rng& rng, int max_depth, double branch = 0.5) {
    return deserialize_structure(random_tree_bytes(rng, max_depth, branch), max_depth);
}

}  // namespace oat::oracles
