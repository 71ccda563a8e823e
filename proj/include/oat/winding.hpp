// SPDX-License-Identifier: Apache-2.0
#pragma once

// Generalized winding number inside/outside classification. Point-in-shape
// is w(x) >= 0.5, robust to small holes in near-watertight meshes.

#include <vector>

#include "oat/kernels.hpp"
#include "oat/math.hpp"
#include "oat/mesh.hpp"

namespace oat {

class WindingEvaluator {
  public:
    explicit WindingEvaluator(const TriangleMesh& mesh);

    double winding(const Vec3& x) const;
    bool inside(const Vec3& x) const { return winding(x) >= 0.5; }

  private:
    std::vector<float> ax_, ay_, az_, bx_, by_, bz_, cx_, cy_, cz_;
    kernels::TriangleSoa soa() const;
};

// One-shot oracle; builds an evaluator per call. Use WindingEvaluator
// directly for batches.
int occupancy_oracle(const TriangleMesh& mesh, const Vec3& x);

}  // namespace oat
