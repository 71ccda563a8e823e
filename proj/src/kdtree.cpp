// SPDX-License-Identifier: Apache-2.0

#include "oat/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace oat {

namespace {
constexpr uint32_t kLeafSize = 16;
}

KdTree3::KdTree3(std::vector<float> xs, std::vector<float> ys, std::vector<float> zs)
    : xs_(std::move(xs)), ys_(std::move(ys)), zs_(std::move(zs)) {
    order_.resize(xs_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    if (!order_.empty()) root_ = build(0, uint32_t(order_.size()), 0);
}

int32_t KdTree3::build(uint32_t begin, uint32_t end, int depth) {
    Node node;
    if (end - begin <= kLeafSize) {
        node.leaf = true;
        node.begin = begin;
        node.end = end;
        nodes_.push_back(node);
        return int32_t(nodes_.size() - 1);
    }
    uint8_t axis = uint8_t(depth % 3);
    const float* coords = axis == 0 ? xs_.data() : (axis == 1 ? ys_.data() : zs_.data());
    uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](uint32_t a, uint32_t b) {
                         return coords[a] < coords[b] || (coords[a] == coords[b] && a < b);
                     });
    node.axis = axis;
    node.split = coords[order_[mid]];
    int32_t self = int32_t(nodes_.size());
    nodes_.push_back(node);
    int32_t left = build(begin, mid, depth + 1);
    int32_t right = build(mid, end, depth + 1);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

void KdTree3::search(int32_t ni, float q[3], float& best_d, uint32_t& best_i) const {
    const Node& node = nodes_[ni];
    if (node.leaf) {
        for (uint32_t k = node.begin; k < node.end; ++k) {
            uint32_t i = order_[k];
            float dx = xs_[i] - q[0];
            float dy = ys_[i] - q[1];
            float dz = zs_[i] - q[2];
            float d = dx * dx + dy * dy + dz * dz;
            if (d < best_d || (d == best_d && i < best_i)) {
                best_d = d;
                best_i = i;
            }
        }
        return;
    }
    float diff = q[node.axis] - node.split;
    int32_t near = diff < 0.f ? node.left : node.right;
    int32_t far = diff < 0.f ? node.right : node.left;
    search(near, q, best_d, best_i);
    if (diff * diff <= best_d) search(far, q, best_d, best_i);
}

uint32_t KdTree3::nearest(float x, float y, float z, float* best_sq) const {
    float q[3] = {x, y, z};
    float best_d = 3.4e38f;
    uint32_t best_i = 0xFFFFFFFFu;
    search(root_, q, best_d, best_i);
    if (best_sq) *best_sq = best_d;
    return best_i;
}

}  // namespace oat
