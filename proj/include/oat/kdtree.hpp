// SPDX-License-Identifier: Apache-2.0
#pragma once

// Minimal 3-d kd-tree for exact nearest-neighbor queries against a fixed
// point set. Equivalence-tested against the brute-force nearest_point3
// kernel.

#include <cstdint>
#include <vector>

namespace oat {

class KdTree3 {
  public:
    KdTree3() = default;
    KdTree3(std::vector<float> xs, std::vector<float> ys, std::vector<float> zs);

    bool empty() const { return xs_.empty(); }
    size_t size() const { return xs_.size(); }

    // Index of the nearest stored point; undefined on an empty tree.
    uint32_t nearest(float x, float y, float z, float* best_sq = nullptr) const;

  private:
    struct Node {
        float split = 0.f;
        int32_t left = -1;
        int32_t right = -1;
        uint32_t begin = 0, end = 0;  // leaf payload range into order_
        uint8_t axis = 0;
        bool leaf = false;
    };

    int32_t build(uint32_t begin, uint32_t end, int depth);
    void search(int32_t node, float q[3], float& best_d, uint32_t& best_i) const;

    std::vector<float> xs_, ys_, zs_;
    std::vector<uint32_t> order_;
    std::vector<Node> nodes_;
    int32_t root_ = -1;
};

}  // namespace oat
