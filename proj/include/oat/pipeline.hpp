// SPDX-License-Identifier: Apache-2.0
#pragma once

// End-to-end orchestration shared by the CLI and the acceptance suite:
// sample -> build tree -> latents -> quantize -> trim -> tokens, and the
// decode/evaluate loop back to grids, meshes and metrics.

#include <map>
#include <string>

#include "oat/decoder.hpp"
#include "oat/metrics.hpp"
#include "oat/tokenizer.hpp"

namespace oat {

struct PipelineConfig {
    double threshold = 5e-4;        // T
    int max_depth = 6;              // L
    size_t surface_points = 100000;
    size_t codebook_size = 512;     // K
    uint32_t grid = 128;            // mesh extraction resolution
    uint32_t iou_grid = 64;         // IoU resolution
    size_t max_tokens = 2048;
    uint64_t seed = 0;
    size_t min_points_per_cell = 4;

    void validate() const;  // throws InputError outside the documented ranges
};

// CD convention: 10K surface samples on each side.
inline constexpr size_t kChamferSamples = 10000;
inline constexpr size_t kKmeansIterations = 25;

struct TokenizeResult {
    AdaptiveOctree tree;  // trimmed to the token cap
    ResidualCodes codes;  // aligned with the trimmed tree
    TokenSequence tokens;
    std::vector<Latent8> latents;  // pre-trim latents of the full tree
    size_t untrimmed_nodes = 0;
    std::map<std::string, double> runtime_ms;
};

// Cloud is expected inside the unit cube (normalize meshes beforehand when
// they are not already unit-cube fixtures).
TokenizeResult tokenize_cloud(const OrientedPointCloud& cloud, const Codebook& codebook,
                              const PipelineConfig& cfg);

struct ReconstructionEval {
    double iou_value = -1.0;
    double chamfer_value = -1.0;
    TriangleMesh reconstructed;
};

// IoU of the decoded field against the winding oracle at iou_grid, plus the
// Chamfer distance between surface samples of the source mesh and of the
// marching-cubes reconstruction at `grid` resolution.
ReconstructionEval evaluate_reconstruction(const TriangleMesh& mesh, const DecodedField& field,
                                           const PipelineConfig& cfg);

// Residual corpus for codebook fitting from one shape.
std::vector<Latent8> shape_residuals(const OrientedPointCloud& cloud, const PipelineConfig& cfg);

}  // namespace oat
