// SPDX-License-Identifier: Apache-2.0

#include "oat/quadric.hpp"

#include <cmath>

#include "oat/error.hpp"

namespace oat {

std::array<double, 3> sym3_eigenvalues(const Sym3& m) {
    // Cyclic Jacobi on a 3x3 symmetric matrix. Converges to machine
    // precision in a handful of sweeps.
    double a[3][3] = {{m.xx, m.xy, m.xz}, {m.xy, m.yy, m.yz}, {m.xz, m.yz, m.zz}};
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if (off < 1e-300) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                double cth = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * cth;
                double tau = s / (1.0 + cth);
                double apq = a[p][q];
                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                int r = 3 - p - q;  // the remaining index
                double arp = a[r][p], arq = a[r][q];
                a[r][p] = arp - s * (arq + tau * arp);
                a[p][r] = a[r][p];
                a[r][q] = arq + s * (arp - tau * arq);
                a[q][r] = a[r][q];
            }
        }
    }
    std::array<double, 3> ev = {a[0][0], a[1][1], a[2][2]};
    if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
    if (ev[1] > ev[2]) std::swap(ev[1], ev[2]);
    if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
    return ev;
}

bool sym3_solve(const Sym3& m, double reg, const Vec3& rhs, Vec3& x) {
    // Cholesky LL^T on the regularized matrix.
    double a00 = m.xx + reg, a11 = m.yy + reg, a22 = m.zz + reg;
    double l00 = a00;
    if (l00 <= 0.0) return false;
    l00 = std::sqrt(l00);
    double l10 = m.xy / l00;
    double l20 = m.xz / l00;
    double d11 = a11 - l10 * l10;
    if (d11 <= 0.0) return false;
    double l11 = std::sqrt(d11);
    double l21 = (m.yz - l20 * l10) / l11;
    double d22 = a22 - l20 * l20 - l21 * l21;
    if (d22 <= 0.0) return false;
    double l22 = std::sqrt(d22);
    // forward then backward substitution
    double y0 = rhs.x / l00;
    double y1 = (rhs.y - l10 * y0) / l11;
    double y2 = (rhs.z - l20 * y0 - l21 * y1) / l22;
    x.z = y2 / l22;
    x.y = (y1 - l21 * x.z) / l11;
    x.x = (y0 - l10 * x.y - l20 * x.z) / l00;
    return true;
}

Quadric quadric_from_point_plane(const Vec3& p, const Vec3& n) {
    double len = norm(n);
    if (std::abs(len - 1.0) > 1e-6)
        throw InputError("quadric_from_point_plane: normal is not unit length");
    double d = dot(n, p);
    Quadric q;
    q.A = {n.x * n.x, n.x * n.y, n.x * n.z, n.y * n.y, n.y * n.z, n.z * n.z};
    q.b = n * -d;
    q.c = d * d;
    q.weight = 1.0;
    return q;
}

QuadricMin quadric_minimize(const Quadric& q, const Vec3& fallback_target, double epsilon) {
    if (epsilon < 0.0) throw InputError("quadric_minimize: epsilon must be >= 0");
    QuadricMin out;
    auto ev = sym3_eigenvalues(q.A);
    double lmax = std::max(std::abs(ev[0]), std::abs(ev[2]));
    double lmin = ev[0];  // PSD: smallest eigenvalue is the smallest magnitude
    bool direct = lmax > 0.0 && lmin / lmax >= kRcondThreshold;
    Vec3 x;
    if (direct && sym3_solve(q.A, 0.0, -q.b, x)) {
        out.x_star = x;
        out.regularized = false;
    } else {
        // minimize E(x) + eps |x - t|^2  =>  (A + eps I) x = -b + eps t
        if (epsilon <= 0.0) {
            // A singular and no regularizer: fall back to the target itself
            out.x_star = fallback_target;
        } else if (sym3_solve(q.A, epsilon, -q.b + epsilon * fallback_target, x)) {
            out.x_star = x;
        } else {
            out.x_star = fallback_target;
        }
        out.regularized = true;
    }
    out.e_star = std::max(0.0, q.energy(out.x_star));
    return out;
}

Quadric quadric_from_points(const float* px, const float* py, const float* pz,
                            const float* nx, const float* ny, const float* nz,
                            size_t n, Vec3* centroid_out) {
    kernels::QuadricAccum a = kernels::active().quadric_accumulate(px, py, pz, nx, ny, nz, n);
    Quadric q;
    q.A = {a.xx, a.xy, a.xz, a.yy, a.yz, a.zz};
    q.b = {a.bx, a.by, a.bz};
    q.c = a.c;
    q.weight = double(n);
    if (centroid_out && n > 0) *centroid_out = Vec3{a.sx, a.sy, a.sz} / double(n);
    return q;
}

double cell_error(const float* px, const float* py, const float* pz,
                  const float* nx, const float* ny, const float* nz, size_t n) {
    if (n == 0) throw InputError("cell_error: empty point set");
    Vec3 centroid;
    Quadric q = quadric_from_points(px, py, pz, nx, ny, nz, n, &centroid);
    QuadricMin m = quadric_minimize(q, centroid, tikhonov_epsilon(q));
    return m.e_star / double(n);
}

}  // namespace oat
