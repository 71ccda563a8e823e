// SPDX-License-Identifier: Apache-2.0

#include "oat/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "oat/error.hpp"
#include "oat/io.hpp"
#include "oat/mesh.hpp"
#include "oat/pipeline.hpp"
#include "oat/sampling.hpp"

namespace oat::cli {

namespace {

struct CommonOpts {
    PipelineConfig cfg;
    std::string codebook_path;
    std::string out_path;
};

void add_config_flags(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--threshold", o.cfg.threshold, "quadric error threshold T");
    sub->add_option("--max-depth", o.cfg.max_depth, "octree max depth L");
    sub->add_option("--points", o.cfg.surface_points, "surface sample count");
    sub->add_option("--codebook-size", o.cfg.codebook_size, "codebook entries K");
    sub->add_option("--grid", o.cfg.grid, "mesh extraction grid resolution");
    sub->add_option("--iou-grid", o.cfg.iou_grid, "IoU grid resolution");
    sub->add_option("--max-tokens", o.cfg.max_tokens, "token cap (BFS-tail trim)");
    sub->add_option("--seed", o.cfg.seed, "RNG seed");
    sub->add_option("--min-points", o.cfg.min_points_per_cell, "min points for subdivision");
    sub->set_config("--config", "", "config file (key=value lines; flags take precedence)");
}

std::map<std::string, std::string> echo_config(const CommonOpts& o) {
    auto fmt = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%g", v);
        return std::string(buf);
    };
    return {
        {"threshold", fmt(o.cfg.threshold)},
        {"max-depth", std::to_string(o.cfg.max_depth)},
        {"points", std::to_string(o.cfg.surface_points)},
        {"codebook-size", std::to_string(o.cfg.codebook_size)},
        {"grid", std::to_string(o.cfg.grid)},
        {"iou-grid", std::to_string(o.cfg.iou_grid)},
        {"max-tokens", std::to_string(o.cfg.max_tokens)},
        {"seed", std::to_string(o.cfg.seed)},
        {"min-points", std::to_string(o.cfg.min_points_per_cell)},
    };
}

EvalReport report_from_tokens(const TokenSequence& tokens) {
    TokenStats st = token_stats(tokens);
    EvalReport rep;
    rep.token_count = st.token_count;
    rep.nodes_per_depth = st.nodes_per_depth;
    rep.threshold = tokens.header.threshold;
    rep.max_depth = tokens.header.max_depth;
    return rep;
}

TriangleMesh load_normalized(const std::string& path) {
    return normalize_mesh(load_mesh(path).mesh);
}

void cmd_tokenize(const std::string& mesh_path, CommonOpts& o) {
    o.cfg.validate();
    if (o.out_path.empty()) throw InputError("tokenize: --out is required");
    Codebook cb = read_codebook(o.codebook_path);
    auto t0 = std::chrono::steady_clock::now();
    TriangleMesh mesh = load_normalized(mesh_path);
    OrientedPointCloud cloud = sample_surface(mesh, o.cfg.surface_points, o.cfg.seed);
    TokenizeResult res = tokenize_cloud(cloud, cb, o.cfg);
    write_tokens(res.tokens, o.out_path, o.cfg.max_tokens);
    auto t1 = std::chrono::steady_clock::now();

    EvalReport rep = report_from_tokens(res.tokens);
    rep.runtime_ms = res.runtime_ms;
    rep.runtime_ms["total"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rep.config = echo_config(o);
    std::cout << rep.to_json() << "\n";
}

void cmd_reconstruct(const std::string& token_path, CommonOpts& o) {
    o.cfg.validate();
    if (o.out_path.empty()) throw InputError("reconstruct: --out is required");
    TokenSequence tokens = read_tokens(token_path);
    Codebook cb = read_codebook(o.codebook_path);
    DecodedField field(decode_leaves(tokens, cb));
    OccupancyGrid grid = occupancy_grid(field, o.cfg.grid);
    TriangleMesh mesh = extract_mesh(grid);
    save_obj(mesh, o.out_path);
}

void cmd_stats(const std::string& token_path) {
    TokenSequence tokens = read_tokens(token_path);
    std::cout << report_from_tokens(tokens).to_json() << "\n";
}

void cmd_eval(const std::string& token_path, const std::string& mesh_path, CommonOpts& o) {
    o.cfg.validate();
    TokenSequence tokens = read_tokens(token_path);
    Codebook cb = read_codebook(o.codebook_path);
    DecodedField field(decode_leaves(tokens, cb));
    TriangleMesh mesh = load_normalized(mesh_path);
    auto t0 = std::chrono::steady_clock::now();
    ReconstructionEval ev = evaluate_reconstruction(mesh, field, o.cfg);
    auto t1 = std::chrono::steady_clock::now();

    EvalReport rep = report_from_tokens(tokens);
    rep.iou = ev.iou_value;
    rep.chamfer = ev.chamfer_value;
    rep.runtime_ms["eval"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rep.config = echo_config(o);
    std::cout << rep.to_json() << "\n";
}

void cmd_fit_codebook(const std::vector<std::string>& mesh_paths, CommonOpts& o) {
    o.cfg.validate();
    if (o.out_path.empty()) throw InputError("fit-codebook: --out is required");
    std::vector<Latent8> pool;
    for (const std::string& path : mesh_paths) {
        TriangleMesh mesh = load_normalized(path);
        OrientedPointCloud cloud = sample_surface(mesh, o.cfg.surface_points, o.cfg.seed);
        std::vector<Latent8> res = shape_residuals(cloud, o.cfg);
        pool.insert(pool.end(), res.begin(), res.end());
    }
    Codebook cb = fit_codebook(pool, o.cfg.codebook_size, kKmeansIterations, o.cfg.seed);
    write_codebook(cb, o.out_path);
    std::fprintf(stderr, "codebook: %zu entries from %zu residuals\n", cb.size(), pool.size());
}

struct SweepRow {
    std::string mesh;
    double threshold = 0.0;
    size_t token_count = 0;
    double iou_value = -1.0;
    double chamfer_value = -1.0;
    double runtime_ms = 0.0;
    std::string error;
};

SweepRow sweep_one(const std::string& mesh_path, double threshold, const Codebook& cb,
                   PipelineConfig cfg) {
    SweepRow row;
    row.mesh = mesh_path;
    row.threshold = threshold;
    auto t0 = std::chrono::steady_clock::now();
    try {
        cfg.threshold = threshold;
        TriangleMesh mesh = load_normalized(mesh_path);
        OrientedPointCloud cloud = sample_surface(mesh, cfg.surface_points, cfg.seed);
        TokenizeResult res = tokenize_cloud(cloud, cb, cfg);
        row.token_count = res.tokens.size();
        DecodedField field(decode_leaves(res.tokens, cb));
        ReconstructionEval ev = evaluate_reconstruction(mesh, field, cfg);
        row.iou_value = ev.iou_value;
        row.chamfer_value = ev.chamfer_value;
    } catch (const Error& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), ',', ';');
        row.error = msg;
    }
    auto t1 = std::chrono::steady_clock::now();
    row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return row;
}

size_t worker_count(size_t jobs) {
    size_t n = 1;
    if (const char* env = std::getenv("OAT_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) n = size_t(v);
    }
    return std::min(n, jobs);
}

void cmd_sweep(const std::vector<std::string>& mesh_paths, const std::vector<double>& thresholds,
               CommonOpts& o) {
    o.cfg.validate();
    if (thresholds.size() < 2) throw InputError("sweep: need at least 2 thresholds");
    Codebook cb = read_codebook(o.codebook_path);

    std::vector<SweepRow> rows(mesh_paths.size() * thresholds.size());
    size_t workers = worker_count(mesh_paths.size());
    if (workers <= 1) {
        for (size_t m = 0; m < mesh_paths.size(); ++m)
            for (size_t t = 0; t < thresholds.size(); ++t)
                rows[m * thresholds.size() + t] =
                    sweep_one(mesh_paths[m], thresholds[t], cb, o.cfg);
    } else {
        // one worker per mesh; rows land at fixed (mesh, threshold) slots
        std::vector<std::future<void>> futures;
        std::atomic<size_t> next{0};
        for (size_t w = 0; w < workers; ++w) {
            futures.push_back(std::async(std::launch::async, [&]() {
                for (;;) {
                    size_t m = next.fetch_add(1);
                    if (m >= mesh_paths.size()) return;
                    for (size_t t = 0; t < thresholds.size(); ++t)
                        rows[m * thresholds.size() + t] =
                            sweep_one(mesh_paths[m], thresholds[t], cb, o.cfg);
                }
            }));
        }
        for (auto& f : futures) f.get();
    }

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!o.out_path.empty()) {
        file.open(o.out_path);
        if (!file) throw InputError("cannot open for writing: " + o.out_path);
        out = &file;
    }
    *out << "mesh,threshold,token_count,iou,chamfer_x1e3,runtime_ms,error\n";
    char buf[512];
    for (const SweepRow& r : rows) {
        if (r.error.empty()) {
            std::snprintf(buf, sizeof(buf), "%s,%g,%zu,%.6f,%.6f,%.1f,\n", r.mesh.c_str(),
                          r.threshold, r.token_count, r.iou_value, r.chamfer_value * 1e3,
                          r.runtime_ms);
        } else {
            std::snprintf(buf, sizeof(buf), "%s,%g,,,,%.1f,%s\n", r.mesh.c_str(), r.threshold,
                          r.runtime_ms, r.error.c_str());
        }
        *out << buf;
    }
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"adaptive octree shape tokenizer"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string mesh_path, token_path;
    std::vector<std::string> mesh_paths;
    std::vector<double> thresholds;

    auto* tok = app.add_subcommand("tokenize", "mesh -> token file + report JSON");
    tok->add_option("mesh", mesh_path, "input mesh (OBJ or PLY)")->required();
    tok->add_option("--codebook", opts.codebook_path, "codebook file")->required();
    tok->add_option("--out", opts.out_path, "output token file")->required();
    add_config_flags(tok, opts);
    tok->callback([&]() { cmd_tokenize(mesh_path, opts); });

    auto* rec = app.add_subcommand("reconstruct", "token file -> OBJ mesh");
    rec->add_option("tokens", token_path, "input token file")->required();
    rec->add_option("--codebook", opts.codebook_path, "codebook file")->required();
    rec->add_option("--out", opts.out_path, "output OBJ path")->required();
    add_config_flags(rec, opts);
    rec->callback([&]() { cmd_reconstruct(token_path, opts); });

    auto* sweep = app.add_subcommand("sweep", "threshold sweep -> CSV");
    sweep->add_option("meshes", mesh_paths, "input meshes")->required();
    sweep->add_option("--thresholds", thresholds, "threshold list")->required()->delimiter(',');
    sweep->add_option("--codebook", opts.codebook_path, "codebook file")->required();
    sweep->add_option("--out", opts.out_path, "output CSV (stdout when omitted)");
    add_config_flags(sweep, opts);
    sweep->callback([&]() { cmd_sweep(mesh_paths, thresholds, opts); });

    auto* fit = app.add_subcommand("fit-codebook", "fit k-means codebook on meshes");
    fit->add_option("meshes", mesh_paths, "input meshes")->required();
    fit->add_option("--out", opts.out_path, "output codebook file")->required();
    add_config_flags(fit, opts);
    fit->callback([&]() { cmd_fit_codebook(mesh_paths, opts); });

    auto* stats = app.add_subcommand("stats", "token file -> report JSON");
    stats->add_option("tokens", token_path, "input token file")->required();
    stats->callback([&]() { cmd_stats(token_path); });

    auto* eval = app.add_subcommand("eval", "token file vs source mesh -> report JSON");
    eval->add_option("tokens", token_path, "input token file")->required();
    eval->add_option("--mesh", mesh_path, "source mesh")->required();
    eval->add_option("--codebook", opts.codebook_path, "codebook file")->required();
    add_config_flags(eval, opts);
    eval->callback([&]() { cmd_eval(token_path, mesh_path, opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return int(ExitCode::usage);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return int(e.exit_code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return int(ExitCode::internal);
    }
    return 0;
}

}  // namespace oat::cli
