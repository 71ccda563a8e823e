// SPDX-License-Identifier: Apache-2.0

#include "oat/winding.hpp"

namespace oat {

namespace {
constexpr double kFourPi = 12.566370614359172953850573533118;
}

WindingEvaluator::WindingEvaluator(const TriangleMesh& mesh) {
    size_t n = mesh.faces.size();
    ax_.reserve(n); ay_.reserve(n); az_.reserve(n);
    bx_.reserve(n); by_.reserve(n); bz_.reserve(n);
    cx_.reserve(n); cy_.reserve(n); cz_.reserve(n);
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3& b = mesh.vertices[f[1]];
        const Vec3& c = mesh.vertices[f[2]];
        ax_.push_back(float(a.x)); ay_.push_back(float(a.y)); az_.push_back(float(a.z));
        bx_.push_back(float(b.x)); by_.push_back(float(b.y)); bz_.push_back(float(b.z));
        cx_.push_back(float(c.x)); cy_.push_back(float(c.y)); cz_.push_back(float(c.z));
    }
}

kernels::TriangleSoa WindingEvaluator::soa() const {
    return {ax_.data(), ay_.data(), az_.data(), bx_.data(), by_.data(), bz_.data(),
            cx_.data(), cy_.data(), cz_.data(), ax_.size()};
}

double WindingEvaluator::winding(const Vec3& x) const {
    return kernels::active().solid_angle_sum(soa(), x.x, x.y, x.z) / kFourPi;
}

int occupancy_oracle(const TriangleMesh& mesh, const Vec3& x) {
    return WindingEvaluator(mesh).inside(x) ? 1 : 0;
}

}  // namespace oat
