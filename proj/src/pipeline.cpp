// SPDX-License-Identifier: Apache-2.0

#include "oat/pipeline.hpp"

#include <chrono>

#include "oat/error.hpp"
#include "oat/sampling.hpp"

namespace oat {

namespace {

class StageTimer {
  public:
    explicit StageTimer(std::map<std::string, double>& out) : out_(out) { reset(); }
    void reset() { last_ = std::chrono::steady_clock::now(); }
    void lap(const std::string& name) {
        auto now = std::chrono::steady_clock::now();
        out_[name] = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
    }

  private:
    std::map<std::string, double>& out_;
    std::chrono::steady_clock::time_point last_;
};

}  // namespace

void PipelineConfig::validate() const {
    if (threshold <= 0.0) throw InputError("config: threshold must be > 0");
    if (max_depth < 1 || max_depth > 10) throw InputError("config: max depth must be in [1, 10]");
    if (surface_points < 1) throw InputError("config: surface point count must be >= 1");
    if (codebook_size < 1 || codebook_size > 65536)
        throw InputError("config: codebook size must be in [1, 65536]");
    if (grid < 8) throw InputError("config: grid resolution must be >= 8");
    if (iou_grid < 8) throw InputError("config: IoU grid resolution must be >= 8");
    if (max_tokens < 9) throw InputError("config: token cap must be >= 9");
    if (min_points_per_cell < 1) throw InputError("config: min points per cell must be >= 1");
}

TokenizeResult tokenize_cloud(const OrientedPointCloud& cloud, const Codebook& codebook,
                              const PipelineConfig& cfg) {
    cfg.validate();
    TokenizeResult res;
    StageTimer timer(res.runtime_ms);

    BuildParams params;
    params.threshold = cfg.threshold;
    params.max_depth = cfg.max_depth;
    params.min_points = cfg.min_points_per_cell;
    AdaptiveOctree tree = build_adaptive_octree(cloud, params);
    res.untrimmed_nodes = tree.node_count();
    timer.lap("tree");

    res.latents = leaf_latents(tree);
    propagate_latents(tree, res.latents);
    timer.lap("latents");

    ResidualCodes codes = residual_quantize(tree, res.latents, codebook);
    timer.lap("quantize");

    if (tree.node_count() > cfg.max_tokens) {
        // the trimmed tree is a BFS prefix, so codes truncate in place
        tree = trim_to_budget(tree, cfg.max_tokens);
        size_t n = tree.node_count();
        codes.q.resize(n);
        codes.z.resize(n);
        codes.z_acc.resize(n);
        codes.phi_hat.resize(n);
    }
    res.tokens = encode_tokens(tree, codes, codebook.hash());
    res.tree = std::move(tree);
    res.codes = std::move(codes);
    timer.lap("encode");
    return res;
}

ReconstructionEval evaluate_reconstruction(const TriangleMesh& mesh, const DecodedField& field,
                                           const PipelineConfig& cfg) {
    cfg.validate();
    ReconstructionEval ev;
    OccupancyGrid oracle = oracle_occupancy_grid(mesh, cfg.iou_grid);
    OccupancyGrid decoded = occupancy_grid(field, cfg.iou_grid);
    ev.iou_value = iou(oracle, decoded);

    OccupancyGrid fine = occupancy_grid(field, cfg.grid);
    ev.reconstructed = extract_mesh(fine);
    OrientedPointCloud gt = sample_surface(mesh, kChamferSamples, cfg.seed);
    OrientedPointCloud rec = sample_surface(ev.reconstructed, kChamferSamples, cfg.seed);
    ev.chamfer_value = chamfer(gt, rec);
    return ev;
}

std::vector<Latent8> shape_residuals(const OrientedPointCloud& cloud, const PipelineConfig& cfg) {
    cfg.validate();
    BuildParams params;
    params.threshold = cfg.threshold;
    params.max_depth = cfg.max_depth;
    params.min_points = cfg.min_points_per_cell;
    AdaptiveOctree tree = build_adaptive_octree(cloud, params);
    std::vector<Latent8> latents = leaf_latents(tree);
    propagate_latents(tree, latents);
    return residual_pool(tree, latents);
}

}  // namespace oat
