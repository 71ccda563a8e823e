// SPDX-License-Identifier: Apache-2.0

// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be entered after a runtime CPU check.
//
// nearest_point3 keeps mul/add ordering identical to the scalar kernel so
// candidate distances are bit-identical across backends; the solid-angle
// kernel matches per-triangle values exactly and differs from scalar only in
// accumulation order.

#include "oat/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace oat::kernels {

namespace {

inline double hsum4(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d load4d(const float* p) { return _mm256_cvtps_pd(_mm_loadu_ps(p)); }

QuadricAccum quadric_accumulate_avx2(const float* px, const float* py, const float* pz,
                                     const float* nx, const float* ny, const float* nz,
                                     size_t n) {
    __m256d xx = _mm256_setzero_pd(), xy = xx, xz = xx, yy = xx, yz = xx, zz = xx;
    __m256d bx = xx, by = xx, bz = xx, cc = xx, sx = xx, sy = xx, sz = xx;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = load4d(px + i), y = load4d(py + i), z = load4d(pz + i);
        __m256d u = load4d(nx + i), v = load4d(ny + i), w = load4d(nz + i);
        __m256d d = _mm256_fmadd_pd(u, x, _mm256_fmadd_pd(v, y, _mm256_mul_pd(w, z)));
        xx = _mm256_fmadd_pd(u, u, xx);
        xy = _mm256_fmadd_pd(u, v, xy);
        xz = _mm256_fmadd_pd(u, w, xz);
        yy = _mm256_fmadd_pd(v, v, yy);
        yz = _mm256_fmadd_pd(v, w, yz);
        zz = _mm256_fmadd_pd(w, w, zz);
        bx = _mm256_fnmadd_pd(u, d, bx);
        by = _mm256_fnmadd_pd(v, d, by);
        bz = _mm256_fnmadd_pd(w, d, bz);
        cc = _mm256_fmadd_pd(d, d, cc);
        sx = _mm256_add_pd(sx, x);
        sy = _mm256_add_pd(sy, y);
        sz = _mm256_add_pd(sz, z);
    }
    QuadricAccum a;
    a.xx = hsum4(xx); a.xy = hsum4(xy); a.xz = hsum4(xz);
    a.yy = hsum4(yy); a.yz = hsum4(yz); a.zz = hsum4(zz);
    a.bx = hsum4(bx); a.by = hsum4(by); a.bz = hsum4(bz);
    a.c = hsum4(cc);
    a.sx = hsum4(sx); a.sy = hsum4(sy); a.sz = hsum4(sz);
    for (; i < n; ++i) {
        double x = px[i], y = py[i], z = pz[i];
        double u = nx[i], v = ny[i], w = nz[i];
        double d = u * x + v * y + w * z;
        a.xx += u * u; a.xy += u * v; a.xz += u * w;
        a.yy += v * v; a.yz += v * w; a.zz += w * w;
        a.bx -= u * d; a.by -= v * d; a.bz -= w * d;
        a.c += d * d;
        a.sx += x; a.sy += y; a.sz += z;
    }
    return a;
}

// Geometry of four triangles per iteration; atan2 stays scalar per lane.
// mul/add ordering mirrors the scalar kernel so each lane's (det, denom)
// pair is bit-identical to the reference.
double solid_angle_sum_avx2(const TriangleSoa& t, double qx, double qy, double qz) {
    const __m256d qxv = _mm256_set1_pd(qx);
    const __m256d qyv = _mm256_set1_pd(qy);
    const __m256d qzv = _mm256_set1_pd(qz);
    double sum = 0.0;
    size_t i = 0;
    alignas(32) double dets[4], denoms[4];
    for (; i + 4 <= t.count; i += 4) {
        __m256d ax = _mm256_sub_pd(load4d(t.ax + i), qxv);
        __m256d ay = _mm256_sub_pd(load4d(t.ay + i), qyv);
        __m256d az = _mm256_sub_pd(load4d(t.az + i), qzv);
        __m256d bx = _mm256_sub_pd(load4d(t.bx + i), qxv);
        __m256d by = _mm256_sub_pd(load4d(t.by + i), qyv);
        __m256d bz = _mm256_sub_pd(load4d(t.bz + i), qzv);
        __m256d cx = _mm256_sub_pd(load4d(t.cx + i), qxv);
        __m256d cy = _mm256_sub_pd(load4d(t.cy + i), qyv);
        __m256d cz = _mm256_sub_pd(load4d(t.cz + i), qzv);

        __m256d la = _mm256_sqrt_pd(_mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(ax, ax), _mm256_mul_pd(ay, ay)), _mm256_mul_pd(az, az)));
        __m256d lb = _mm256_sqrt_pd(_mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(bx, bx), _mm256_mul_pd(by, by)), _mm256_mul_pd(bz, bz)));
        __m256d lc = _mm256_sqrt_pd(_mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(cx, cx), _mm256_mul_pd(cy, cy)), _mm256_mul_pd(cz, cz)));

        __m256d det = _mm256_add_pd(
            _mm256_sub_pd(
                _mm256_mul_pd(ax, _mm256_sub_pd(_mm256_mul_pd(by, cz), _mm256_mul_pd(bz, cy))),
                _mm256_mul_pd(ay, _mm256_sub_pd(_mm256_mul_pd(bx, cz), _mm256_mul_pd(bz, cx)))),
            _mm256_mul_pd(az, _mm256_sub_pd(_mm256_mul_pd(bx, cy), _mm256_mul_pd(by, cx))));

        __m256d ab = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(ax, bx), _mm256_mul_pd(ay, by)), _mm256_mul_pd(az, bz));
        __m256d bc = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(bx, cx), _mm256_mul_pd(by, cy)), _mm256_mul_pd(bz, cz));
        __m256d ca = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(cx, ax), _mm256_mul_pd(cy, ay)), _mm256_mul_pd(cz, az));

        __m256d denom = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(_mm256_mul_pd(la, lb), lc), _mm256_mul_pd(ab, lc)),
            _mm256_add_pd(_mm256_mul_pd(bc, la), _mm256_mul_pd(ca, lb)));

        _mm256_store_pd(dets, det);
        _mm256_store_pd(denoms, denom);
        sum += 2.0 * std::atan2(dets[0], denoms[0]);
        sum += 2.0 * std::atan2(dets[1], denoms[1]);
        sum += 2.0 * std::atan2(dets[2], denoms[2]);
        sum += 2.0 * std::atan2(dets[3], denoms[3]);
    }
    for (; i < t.count; ++i) {
        double ax = double(t.ax[i]) - qx, ay = double(t.ay[i]) - qy, az = double(t.az[i]) - qz;
        double bx = double(t.bx[i]) - qx, by = double(t.by[i]) - qy, bz = double(t.bz[i]) - qz;
        double cx = double(t.cx[i]) - qx, cy = double(t.cy[i]) - qy, cz = double(t.cz[i]) - qz;
        double la = std::sqrt(ax * ax + ay * ay + az * az);
        double lb = std::sqrt(bx * bx + by * by + bz * bz);
        double lc = std::sqrt(cx * cx + cy * cy + cz * cz);
        double det =
            ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) + az * (bx * cy - by * cx);
        double ab = ax * bx + ay * by + az * bz;
        double bc = bx * cx + by * cy + bz * cz;
        double ca = cx * ax + cy * ay + cz * az;
        sum += 2.0 * std::atan2(det, la * lb * lc + ab * lc + bc * la + ca * lb);
    }
    return sum;
}

uint32_t nearest_entry8_avx2(const double* q, const double* entries, size_t k,
                             double* best_sq) {
    const __m256d q0 = _mm256_loadu_pd(q);
    const __m256d q1 = _mm256_loadu_pd(q + 4);
    uint32_t best = 0;
    double best_d = 1e300;
    for (size_t i = 0; i < k; ++i) {
        const double* e = entries + 8 * i;
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(e), q0);
        __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(e + 4), q1);
        double d = hsum4(_mm256_fmadd_pd(d0, d0, _mm256_mul_pd(d1, d1)));
        if (d < best_d) {
            best_d = d;
            best = uint32_t(i);
        }
    }
    if (best_sq) *best_sq = best_d;
    return best;
}

uint32_t nearest_point3_avx2(float qx, float qy, float qz,
                             const float* px, const float* py, const float* pz,
                             size_t n, float* best_sq) {
    const __m256 qxv = _mm256_set1_ps(qx);
    const __m256 qyv = _mm256_set1_ps(qy);
    const __m256 qzv = _mm256_set1_ps(qz);
    __m256 best_v = _mm256_set1_ps(3.4e38f);
    __m256i best_i = _mm256_setzero_si256();
    __m256i idx = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    const __m256i step = _mm256_set1_epi32(8);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 dx = _mm256_sub_ps(_mm256_loadu_ps(px + i), qxv);
        __m256 dy = _mm256_sub_ps(_mm256_loadu_ps(py + i), qyv);
        __m256 dz = _mm256_sub_ps(_mm256_loadu_ps(pz + i), qzv);
        // mul/add only: keeps distances bit-identical to the scalar kernel
        __m256 d = _mm256_add_ps(
            _mm256_add_ps(_mm256_mul_ps(dx, dx), _mm256_mul_ps(dy, dy)), _mm256_mul_ps(dz, dz));
        __m256 lt = _mm256_cmp_ps(d, best_v, _CMP_LT_OQ);
        best_v = _mm256_blendv_ps(best_v, d, lt);
        best_i = _mm256_castps_si256(
            _mm256_blendv_ps(_mm256_castsi256_ps(best_i), _mm256_castsi256_ps(idx), lt));
        idx = _mm256_add_epi32(idx, step);
    }
    alignas(32) float vals[8];
    alignas(32) uint32_t idxs[8];
    _mm256_store_ps(vals, best_v);
    _mm256_store_si256(reinterpret_cast<__m256i*>(idxs), best_i);
    uint32_t best = 0;
    float best_d = 3.4e38f;
    // lexicographic (value, index) min reproduces the scalar first-hit rule
    for (int lane = 0; lane < 8; ++lane) {
        if (vals[lane] < best_d || (vals[lane] == best_d && idxs[lane] < best)) {
            best_d = vals[lane];
            best = idxs[lane];
        }
    }
    for (; i < n; ++i) {
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

}  // namespace

const Backend kAvx2Backend = {
    "avx2",
    quadric_accumulate_avx2,
    solid_angle_sum_avx2,
    nearest_entry8_avx2,
    nearest_point3_avx2,
};

}  // namespace oat::kernels

#endif  // x86-64
