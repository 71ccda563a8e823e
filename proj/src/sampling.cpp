// SPDX-License-Identifier: Apache-2.0

#include "oat/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "oat/error.hpp"
#include "oat/io.hpp"
#include "oat/winding.hpp"

namespace oat {

namespace {

// Cumulative area table; degenerate faces get zero weight.
std::vector<double> cumulative_areas(const TriangleMesh& mesh) {
    std::vector<double> cum(mesh.faces.size());
    double total = 0.0;
    for (size_t f = 0; f < mesh.faces.size(); ++f) {
        total += mesh.face_area(f);
        cum[f] = total;
    }
    if (total <= 0.0) throw InputError("surface sampling: mesh has zero total area");
    return cum;
}

struct SurfaceSample {
    Vec3 p;
    Vec3 n;
};

SurfaceSample sample_one(const TriangleMesh& mesh, const std::vector<double>& cum, Rng& rng) {
    double total = cum.back();
    double u = rng.uniform() * total;
    size_t f = size_t(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (f >= cum.size()) f = cum.size() - 1;
    // uniform barycentric point via the sqrt trick
    double r1 = std::sqrt(rng.uniform());
    double r2 = rng.uniform();
    const auto& t = mesh.faces[f];
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    Vec3 p = a * (1.0 - r1) + b * (r1 * (1.0 - r2)) + c * (r1 * r2);
    return {p, mesh.face_normal(f)};
}

}  // namespace

OrientedPointCloud sample_surface(const TriangleMesh& mesh, size_t n, uint64_t seed) {
    if (n < 1) throw InputError("sample_surface: n must be >= 1");
    if (mesh.empty()) throw InputError("sample_surface: empty mesh");
    std::vector<double> cum = cumulative_areas(mesh);
    OrientedPointCloud cloud;
    cloud.px.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        Rng rng(seed, i);
        SurfaceSample s = sample_one(mesh, cum, rng);
        cloud.push(s.p, s.n);
    }
    return cloud;
}

QuerySet sample_queries(const TriangleMesh& mesh, size_t n_uniform, size_t n_near,
                        double sigma, uint64_t seed) {
    if (sigma <= 0.0) throw InputError("sample_queries: sigma must be > 0");
    std::vector<double> cum = n_near > 0 ? cumulative_areas(mesh) : std::vector<double>{};
    QuerySet qs;
    qs.points.reserve(n_uniform + n_near);
    for (size_t i = 0; i < n_uniform; ++i) {
        Rng rng(seed, i);
        qs.points.push_back({float(rng.uniform()), float(rng.uniform()), float(rng.uniform())});
    }
    auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
    for (size_t j = 0; j < n_near; ++j) {
        Rng rng(seed, n_uniform + j);
        SurfaceSample s = sample_one(mesh, cum, rng);
        Vec3 p{clamp01(s.p.x + sigma * rng.normal()),
               clamp01(s.p.y + sigma * rng.normal()),
               clamp01(s.p.z + sigma * rng.normal())};
        qs.points.push_back({float(p.x), float(p.y), float(p.z)});
    }
    WindingEvaluator we(mesh);
    qs.occupancy.resize(qs.points.size());
    for (size_t i = 0; i < qs.points.size(); ++i) {
        const auto& p = qs.points[i];
        qs.occupancy[i] = we.inside({p[0], p[1], p[2]}) ? 1 : 0;
    }
    return qs;
}

void write_point_cloud(const OrientedPointCloud& cloud, const std::string& path) {
    io::Writer w(path);
    w.magic("OATP");
    w.pod<uint32_t>(uint32_t(cloud.size()));
    for (size_t i = 0; i < cloud.size(); ++i) {
        float rec[6] = {cloud.px[i], cloud.py[i], cloud.pz[i],
                        cloud.nx[i], cloud.ny[i], cloud.nz[i]};
        w.bytes(rec, sizeof(rec));
    }
    w.close();
}

OrientedPointCloud read_point_cloud(const std::string& path) {
    io::Reader r(path);
    r.expect_magic("OATP", "point cloud");
    uint32_t n = r.pod<uint32_t>();
    OrientedPointCloud cloud;
    cloud.resize(n);
    for (uint32_t i = 0; i < n; ++i) {
        float rec[6];
        r.bytes(rec, sizeof(rec));
        cloud.px[i] = rec[0]; cloud.py[i] = rec[1]; cloud.pz[i] = rec[2];
        cloud.nx[i] = rec[3]; cloud.ny[i] = rec[4]; cloud.nz[i] = rec[5];
    }
    return cloud;
}

}  // namespace oat
