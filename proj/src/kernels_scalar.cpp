// SPDX-License-Identifier: Apache-2.0

// Scalar reference kernels. These are the semantic ground truth the SIMD
// variants are tested against; keep them simple and obviously correct.

#include "oat/kernels.hpp"

#include <cmath>

namespace oat::kernels {

static QuadricAccum quadric_accumulate_scalar(const float* px, const float* py, const float* pz,
                                              const float* nx, const float* ny, const float* nz,
                                              size_t n) {
    QuadricAccum a;
    for (size_t i = 0; i < n; ++i) {
        double x = px[i], y = py[i], z = pz[i];
        double u = nx[i], v = ny[i], w = nz[i];
        double d = u * x + v * y + w * z;  // n . p
        a.xx += u * u;
        a.xy += u * v;
        a.xz += u * w;
        a.yy += v * v;
        a.yz += v * w;
        a.zz += w * w;
        a.bx -= u * d;
        a.by -= v * d;
        a.bz -= w * d;
        a.c += d * d;
        a.sx += x;
        a.sy += y;
        a.sz += z;
    }
    return a;
}

// Van Oosterom-Strackee signed solid angle of one triangle.
static inline double solid_angle_one(double ax, double ay, double az,
                                     double bx, double by, double bz,
                                     double cx, double cy, double cz) {
    double la = std::sqrt(ax * ax + ay * ay + az * az);
    double lb = std::sqrt(bx * bx + by * by + bz * bz);
    double lc = std::sqrt(cx * cx + cy * cy + cz * cz);
    double det = ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) + az * (bx * cy - by * cx);
    double ab = ax * bx + ay * by + az * bz;
    double bc = bx * cx + by * cy + bz * cz;
    double ca = cx * ax + cy * ay + cz * az;
    double denom = la * lb * lc + ab * lc + bc * la + ca * lb;
    return 2.0 * std::atan2(det, denom);
}

static double solid_angle_sum_scalar(const TriangleSoa& t, double qx, double qy, double qz) {
    double sum = 0.0;
    for (size_t i = 0; i < t.count; ++i) {
        sum += solid_angle_one(t.ax[i] - qx, t.ay[i] - qy, t.az[i] - qz,
                               t.bx[i] - qx, t.by[i] - qy, t.bz[i] - qz,
                               t.cx[i] - qx, t.cy[i] - qy, t.cz[i] - qz);
    }
    return sum;
}

static uint32_t nearest_entry8_scalar(const double* q, const double* entries, size_t k,
                                      double* best_sq) {
    uint32_t best = 0;
    double best_d = 1e300;
    for (size_t i = 0; i < k; ++i) {
        const double* e = entries + 8 * i;
        double d = 0.0;
        for (int j = 0; j < 8; ++j) {
            double t = e[j] - q[j];
            d += t * t;
        }
        if (d < best_d) {
            best_d = d;
            best = uint32_t(i);
        }
    }
    if (best_sq) *best_sq = best_d;
    return best;
}

static uint32_t nearest_point3_scalar(float qx, float qy, float qz,
                                      const float* px, const float* py, const float* pz,
                                      size_t n, float* best_sq) {
    uint32_t best = 0;
    float best_d = 3.4e38f;
    for (size_t i = 0; i < n; ++i) {
        float dx = px[i] - qx;
        float dy = py[i] - qy;
        float dz = pz[i] - qz;
        float d = dx * dx + dy * dy + dz * dz;
        if (d < best_d) {
            best_d = d;
            best = uint32_t(i);
        }
    }
    if (best_sq) *best_sq = best_d;
    return best;
}

const Backend kScalarBackend = {
    "scalar",
    quadric_accumulate_scalar,
    solid_angle_sum_scalar,
    nearest_entry8_scalar,
    nearest_point3_scalar,
};

}  // namespace oat::kernels
