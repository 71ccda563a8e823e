// SPDX-License-Identifier: Apache-2.0
#pragma once

// Data-parallel inner loops used by the pipeline. Every kernel has a scalar
// reference implementation and, on x86-64, an AVX2+FMA variant; the active
// backend is picked once at runtime from CPU features. The two backends are
// equivalence-tested against each other in tests/test_kernels.cpp.
//
// Layout contract: point and triangle data arrive as structure-of-arrays
// float spans; accumulation happens in double.

#include <cstddef>
#include <cstdint>

namespace oat::kernels {

// Accumulated plane quadric over a span of oriented points, plus the
// position sums needed for the centroid fallback target.
struct QuadricAccum {
    double xx = 0, xy = 0, xz = 0, yy = 0, yz = 0, zz = 0;  // A = sum n n^T
    double bx = 0, by = 0, bz = 0;                          // b = -sum n (n.p)
    double c = 0;                                           // c = sum (n.p)^2
    double sx = 0, sy = 0, sz = 0;                          // sum p
};

// Nine parallel arrays with the three vertices of each triangle.
struct TriangleSoa {
    const float* ax; const float* ay; const float* az;
    const float* bx; const float* by; const float* bz;
    const float* cx; const float* cy; const float* cz;
    size_t count;
};

using QuadricAccumFn = QuadricAccum (*)(const float* px, const float* py, const float* pz,
                                        const float* nx, const float* ny, const float* nz,
                                        size_t n);

// Sum of signed solid angles subtended by the triangles at (qx, qy, qz),
// i.e. 4*pi times the generalized winding number.
using SolidAngleSumFn = double (*)(const TriangleSoa& tris, double qx, double qy, double qz);

// Index of the nearest 8-d codebook entry (row-major k x 8 doubles) under
// squared Euclidean distance; ties resolve to the lowest index.
using NearestEntry8Fn = uint32_t (*)(const double* query, const double* entries, size_t k,
                                     double* best_sq);

// Index of the nearest 3-d point in SoA float arrays; ties resolve to the
// lowest index. Backends produce bit-identical results because each candidate
// distance is evaluated with the same operation order.
using NearestPoint3Fn = uint32_t (*)(float qx, float qy, float qz,
                                     const float* px, const float* py, const float* pz,
                                     size_t n, float* best_sq);

struct Backend {
    const char* name;
    QuadricAccumFn quadric_accumulate;
    SolidAngleSumFn solid_angle_sum;
    NearestEntry8Fn nearest_entry8;
    NearestPoint3Fn nearest_point3;
};

extern const Backend kScalarBackend;
#if defined(__x86_64__) || defined(_M_X64)
extern const Backend kAvx2Backend;
#endif

// Active backend: AVX2 when the CPU supports it and the build enabled it,
// scalar otherwise. OAT_FORCE_SCALAR=1 in the environment forces scalar.
const Backend& active();

// True if the AVX2 variant can run on this machine.
bool avx2_available();

}  // namespace oat::kernels
