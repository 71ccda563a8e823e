// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reconstruction and tokenization metrics: volume IoU over occupancy grids,
// symmetric squared-distance Chamfer over point sets, token statistics.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oat/decoder.hpp"
#include "oat/sampling.hpp"
#include "oat/tokenizer.hpp"

namespace oat {

// |A and B| / |A or B|; 1.0 when both grids are empty.
double iou(const OccupancyGrid& a, const OccupancyGrid& b);

// Chamfer distance: halved symmetric mean of squared exact nearest-neighbor
// distances, (mean_a min_b |a-b|^2 + mean_b min_a |b-a|^2) / 2.
double chamfer(const OrientedPointCloud& a, const OrientedPointCloud& b);
double chamfer(const std::vector<float>& ax, const std::vector<float>& ay,
               const std::vector<float>& az, const std::vector<float>& bx,
               const std::vector<float>& by, const std::vector<float>& bz);

struct TokenStats {
    size_t token_count = 0;
    std::map<int, size_t> nodes_per_depth;
    size_t leaf_count = 0;
    size_t internal_count = 0;
    double q_entropy_bits = 0.0;
};

TokenStats token_stats(const TokenSequence& seq);

struct EvalReport {
    double iou = -1.0;              // negative = not computed
    double chamfer = -1.0;          // absolute squared-distance units
    size_t token_count = 0;
    std::map<int, size_t> nodes_per_depth;
    double threshold = 0.0;
    int max_depth = 0;
    std::map<std::string, double> runtime_ms;
    std::map<std::string, std::string> config;

    // Fixed key names: iou, chamfer_x1e3, token_count, nodes_per_depth,
    // threshold, max_depth, runtime_ms (plus the echoed config).
    std::string to_json() const;
};

}  // namespace oat
