// SPDX-License-Identifier: Apache-2.0
#pragma once

// Plane quadrics: symmetric quadratic forms measuring summed squared
// point-to-plane distance. The minimum energy over position ("cell error")
// quantifies local geometric complexity and drives octree subdivision.
//
// A quadric built from plane (p, n) satisfies E(x) = (n . (x - p))^2 with
//   E(x) = x^T A x + 2 b^T x + c,
//   A = n n^T,  b = -n (n . p),  c = (n . p)^2.
// Quadrics add: the energy of a sum is the sum of energies.

#include "oat/kernels.hpp"
#include "oat/math.hpp"

namespace oat {

struct Quadric {
    Sym3 A;
    Vec3 b;
    double c = 0.0;
    double weight = 0.0;  // number of accumulated planes

    double energy(const Vec3& x) const { return dot(x, A.apply(x)) + 2.0 * dot(b, x) + c; }

    Quadric& operator+=(const Quadric& o) {
        A = A + o.A;
        b += o.b;
        c += o.c;
        weight += o.weight;
        return *this;
    }
    Quadric operator+(const Quadric& o) const {
        Quadric r = *this;
        r += o;
        return r;
    }
};

struct QuadricMin {
    Vec3 x_star;          // minimizer
    double e_star = 0.0;  // unregularized energy at the minimizer, clamped at 0
    bool regularized = false;
};

// Quadric of a single plane through p with unit normal n.
// Throws InputError when the normal is not unit length (1e-6 tolerance).
Quadric quadric_from_point_plane(const Vec3& p, const Vec3& n);

// Minimizes E(x). Solves A x = -b directly when the reciprocal condition
// number of A is at least 1e-8; otherwise minimizes the Tikhonov-regularized
// energy E(x) + epsilon * |x - fallback_target|^2 and sets `regularized`.
// e_star is always evaluated with the unregularized quadric so downstream
// threshold tests are unbiased by the regularizer.
QuadricMin quadric_minimize(const Quadric& q, const Vec3& fallback_target, double epsilon);

// Quadric accumulated over SoA point/normal spans (kernel-backed), with the
// running position sum returned through centroid_out for fallback targeting.
Quadric quadric_from_points(const float* px, const float* py, const float* pz,
                            const float* nx, const float* ny, const float* nz,
                            size_t n, Vec3* centroid_out = nullptr);

// Average quadric error of a point set: min_x E(x) / n, using the
// centroid-targeted regularized minimizer. Throws InputError on empty input.
double cell_error(const float* px, const float* py, const float* pz,
                  const float* nx, const float* ny, const float* nz, size_t n);

// Epsilon used for the Tikhonov fallback, scaled to the quadric's magnitude.
inline double tikhonov_epsilon(const Quadric& q) { return 1e-9 * q.A.trace(); }

inline constexpr double kRcondThreshold = 1e-8;

}  // namespace oat
