// SPDX-License-Identifier: Apache-2.0

#include "oat/tokenizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "oat/error.hpp"
#include "oat/io.hpp"
#include "oat/kernels.hpp"
#include "oat/quadric.hpp"

namespace oat {

uint64_t fnv1a(const void* data, size_t n, uint64_t basis) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = basis;
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<Latent8> leaf_latents(const AdaptiveOctree& tree) {
    const auto& pts = tree.points;
    const double n_total = double(pts.size());
    std::vector<Latent8> latents(tree.nodes.size(), Latent8{});
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
        const OctreeCell& cell = tree.nodes[i];
        if (!cell.is_leaf()) continue;
        uint32_t b = cell.point_begin, e = cell.point_end;
        uint32_t count = e - b;
        Vec3 centroid;
        Quadric q = quadric_from_points(pts.px.data() + b, pts.py.data() + b,
                                        pts.pz.data() + b, pts.nx.data() + b,
                                        pts.ny.data() + b, pts.nz.data() + b, count, &centroid);
        QuadricMin qm = quadric_minimize(q, centroid, tikhonov_epsilon(q));
        double mean_nx = 0, mean_ny = 0, mean_nz = 0;
        for (uint32_t k = b; k < e; ++k) {
            mean_nx += pts.nx[k];
            mean_ny += pts.ny[k];
            mean_nz += pts.nz[k];
        }
        Vec3 lo = cell.lo();
        double size = 2.0 * cell.half_extent();
        Latent8& l = latents[i];
        l[0] = (qm.x_star.x - lo.x) / size;
        l[1] = (qm.x_star.y - lo.y) / size;
        l[2] = (qm.x_star.z - lo.z) / size;
        l[3] = mean_nx / count;
        l[4] = mean_ny / count;
        l[5] = mean_nz / count;
        l[6] = std::min(1.0, std::sqrt(cell.e_star > 0.0 ? cell.e_star : qm.e_star / count));
        l[7] = count / n_total;
    }
    return latents;
}

void propagate_latents(const AdaptiveOctree& tree, std::vector<Latent8>& latents) {
    if (latents.size() != tree.nodes.size())
        throw InputError("propagate_latents: latent count does not match node count");
    for (size_t ri = tree.nodes.size(); ri-- > 0;) {
        const OctreeCell& cell = tree.nodes[ri];
        if (cell.is_leaf()) continue;
        int n_children = std::popcount(cell.child_mask);
        Latent8 sum{};
        for (int c = 0; c < n_children; ++c) sum = sum + latents[cell.first_child + c];
        for (int k = 0; k < 8; ++k) latents[ri][k] = sum[k] / n_children;
    }
}

uint64_t Codebook::hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (const Latent8& e : entries) {
        float row[8];
        for (int i = 0; i < 8; ++i) row[i] = float(e[i]);
        h = fnv1a(row, sizeof(row), h);
    }
    return h;
}

std::vector<double> Codebook::flat() const {
    std::vector<double> f;
    f.reserve(entries.size() * 8);
    for (const Latent8& e : entries) f.insert(f.end(), e.begin(), e.end());
    return f;
}

std::vector<Latent8> residual_pool(const AdaptiveOctree& tree,
                                   const std::vector<Latent8>& latents) {
    if (latents.size() != tree.nodes.size())
        throw InputError("residual_pool: latent count does not match node count");
    std::vector<Latent8> pool;
    pool.reserve(tree.nodes.size());
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
        const OctreeCell& cell = tree.nodes[i];
        pool.push_back(cell.parent < 0 ? latents[i] : latents[i] - latents[size_t(cell.parent)]);
    }
    return pool;
}

namespace {

size_t farthest_point(const std::vector<Latent8>& pts, const std::vector<double>& dist2) {
    size_t best = 0;
    double best_d = -1.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        if (dist2[i] > best_d) {
            best_d = dist2[i];
            best = i;
        }
    }
    return best;
}

}  // namespace

Codebook fit_codebook(const std::vector<Latent8>& residuals, size_t k, size_t iterations,
                      uint64_t seed, std::vector<double>* objective_history) {
    if (k < 1) throw InputError("fit_codebook: k must be >= 1");
    if (k > 65536) throw InputError("fit_codebook: k must be <= 65536");
    {
        std::vector<Latent8> sorted = residuals;
        std::sort(sorted.begin(), sorted.end());
        size_t distinct = size_t(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
        if (distinct < k)
            throw InputError("fit_codebook: training error, only " + std::to_string(distinct) +
                             " distinct residual vectors for k=" + std::to_string(k));
    }
    const size_t n = residuals.size();
    Rng rng(seed, 0);
    Codebook cb;
    cb.iterations = uint32_t(iterations);
    cb.seed = seed;

    // k-means++ seeding
    std::vector<double> dist2(n, 1e300);
    cb.entries.push_back(residuals[rng.below(uint32_t(n))]);
    for (size_t i = 0; i < n; ++i) dist2[i] = distance2(residuals[i], cb.entries[0]);
    while (cb.entries.size() < k) {
        double total = 0.0;
        for (double d : dist2) total += d;
        size_t pick;
        if (total <= 0.0) {
            pick = farthest_point(residuals, dist2);
        } else {
            double r = rng.uniform() * total;
            double acc = 0.0;
            pick = n - 1;
            for (size_t i = 0; i < n; ++i) {
                acc += dist2[i];
                if (acc >= r) {
                    pick = i;
                    break;
                }
            }
            if (dist2[pick] <= 0.0) pick = farthest_point(residuals, dist2);
        }
        cb.entries.push_back(residuals[pick]);
        for (size_t i = 0; i < n; ++i)
            dist2[i] = std::min(dist2[i], distance2(residuals[i], cb.entries.back()));
    }

    // Lloyd iterations
    std::vector<uint32_t> assign(n, 0);
    for (size_t iter = 0; iter < iterations; ++iter) {
        std::vector<double> flat = cb.flat();
        double objective = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double d;
            assign[i] = kernels::active().nearest_entry8(residuals[i].data(), flat.data(), k, &d);
            dist2[i] = d;
            objective += d;
        }
        if (objective_history) objective_history->push_back(objective);

        std::vector<Latent8> sums(k, Latent8{});
        std::vector<size_t> counts(k, 0);
        for (size_t i = 0; i < n; ++i) {
            sums[assign[i]] = sums[assign[i]] + residuals[i];
            ++counts[assign[i]];
        }
        for (size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                size_t far = farthest_point(residuals, dist2);
                cb.entries[c] = residuals[far];
                dist2[far] = 0.0;
                continue;
            }
            for (int j = 0; j < 8; ++j) cb.entries[c][j] = sums[c][j] / double(counts[c]);
        }
        // keep entries pairwise distinct
        for (size_t a = 0; a < k; ++a) {
            for (size_t b2 = a + 1; b2 < k; ++b2) {
                if (distance2(cb.entries[a], cb.entries[b2]) <= 1e-24) {
                    size_t far = farthest_point(residuals, dist2);
                    cb.entries[b2] = residuals[far];
                    dist2[far] = 0.0;
                }
            }
        }
    }
    return cb;
}

void write_codebook(const Codebook& cb, const std::string& path) {
    io::Writer w(path);
    w.magic("OATC");
    w.pod<uint32_t>(uint32_t(cb.entries.size()));
    w.pod<uint32_t>(8);
    for (const Latent8& e : cb.entries) {
        float row[8];
        for (int i = 0; i < 8; ++i) row[i] = float(e[i]);
        w.bytes(row, sizeof(row));
    }
    w.pod<uint64_t>(cb.hash());
    w.close();
}

Codebook read_codebook(const std::string& path) {
    io::Reader r(path);
    r.expect_magic("OATC", "codebook");
    uint32_t k = r.pod<uint32_t>();
    uint32_t dim = r.pod<uint32_t>();
    if (dim != 8)
        throw InputError(path + ": unsupported codebook dimension " + std::to_string(dim));
    Codebook cb;
    cb.entries.resize(k);
    for (uint32_t i = 0; i < k; ++i) {
        float row[8];
        r.bytes(row, sizeof(row));
        for (int j = 0; j < 8; ++j) cb.entries[i][j] = double(row[j]);
    }
    uint64_t stored = r.pod<uint64_t>();
    if (stored != cb.hash())
        throw InputError(path + ": codebook self-hash mismatch (corrupt file)");
    return cb;
}

ResidualCodes residual_quantize(const AdaptiveOctree& tree, const std::vector<Latent8>& latents,
                                const Codebook& codebook) {
    if (latents.size() != tree.nodes.size())
        throw InputError("residual_quantize: latent count does not match node count");
    if (codebook.entries.empty()) throw InputError("residual_quantize: empty codebook");
    const size_t n = tree.nodes.size();
    std::vector<double> flat = codebook.flat();
    ResidualCodes codes;
    codes.q.resize(n);
    codes.z.resize(n);
    codes.z_acc.resize(n);
    codes.phi_hat.resize(n);
    // BFS index order is level order, so parents are always quantized first.
    for (size_t i = 0; i < n; ++i) {
        int32_t parent = tree.nodes[i].parent;
        Latent8 residual = parent < 0 ? latents[i] : latents[i] - codes.z_acc[size_t(parent)];
        codes.q[i] = kernels::active().nearest_entry8(residual.data(), flat.data(),
                                                      codebook.entries.size(), nullptr);
        codes.z[i] = codebook.entries[codes.q[i]];
        codes.z_acc[i] = parent < 0 ? codes.z[i] : codes.z_acc[size_t(parent)] + codes.z[i];
        codes.phi_hat[i] = codes.z_acc[i];
    }
    return codes;
}

std::vector<Latent8> accumulate_latents(const AdaptiveOctree& tree,
                                        const std::vector<Latent8>& z) {
    if (z.size() != tree.nodes.size())
        throw InputError("accumulate_latents: residual count does not match node count");
    std::vector<Latent8> acc(z.size());
    for (size_t i = 0; i < z.size(); ++i) {
        int32_t parent = tree.nodes[i].parent;
        acc[i] = parent < 0 ? z[i] : acc[size_t(parent)] + z[i];
    }
    return acc;
}

TokenSequence encode_tokens(const AdaptiveOctree& tree, const ResidualCodes& codes,
                            uint64_t codebook_hash) {
    if (codes.q.size() != tree.nodes.size())
        throw InputError("encode_tokens: code count does not match node count");
    TokenSequence seq;
    seq.header.max_depth = tree.max_depth;
    seq.header.threshold = tree.threshold;
    seq.header.codebook_hash = codebook_hash;
    seq.q.reserve(tree.nodes.size());
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
        if (codes.q[i] > 0xFFFF)
            throw InputError("encode_tokens: codebook index exceeds u16 range");
        seq.q.push_back(uint16_t(codes.q[i]));
        seq.chi.push_back(tree.nodes[i].child_mask);
        seq.pe.push_back(tree_pe_indices(tree.nodes[i], tree.max_depth));
    }
    return seq;
}

void write_tokens(const TokenSequence& seq, const std::string& path, size_t max_tokens) {
    if (seq.size() > max_tokens)
        throw InputError("write_tokens: cap exceeded (" + std::to_string(seq.size()) +
                         " tokens > " + std::to_string(max_tokens) + "); trim the tree first");
    io::Writer w(path);
    w.magic("OAT1");
    w.pod<uint8_t>(1);
    w.pod<uint8_t>(uint8_t(seq.header.max_depth));
    w.pod<float>(float(seq.header.threshold));
    w.pod<uint64_t>(seq.header.codebook_hash);
    w.pod<uint32_t>(uint32_t(seq.size()));
    for (size_t i = 0; i < seq.size(); ++i) {
        w.pod<uint16_t>(seq.q[i]);
        w.pod<uint8_t>(seq.chi[i]);
    }
    w.close();
}

TokenSequence read_tokens(const std::string& path) {
    io::Reader r(path);
    r.expect_magic("OAT1", "token");
    uint8_t version = r.pod<uint8_t>();
    if (version != 1)
        throw InputError(path + ": unsupported token file version " + std::to_string(version));
    TokenSequence seq;
    seq.header.max_depth = r.pod<uint8_t>();
    seq.header.threshold = double(r.pod<float>());
    seq.header.codebook_hash = r.pod<uint64_t>();
    uint32_t count = r.pod<uint32_t>();
    seq.q.resize(count);
    seq.chi.resize(count);
    for (uint32_t i = 0; i < count; ++i) {
        seq.q[i] = r.pod<uint16_t>();
        seq.chi[i] = r.pod<uint8_t>();
    }
    // validate the structure and recover positional indices
    AdaptiveOctree structure = deserialize_structure(seq.chi, seq.header.max_depth);
    seq.pe.reserve(count);
    for (uint32_t i = 0; i < count; ++i)
        seq.pe.push_back(tree_pe_indices(structure.nodes[i], seq.header.max_depth));
    return seq;
}

}  // namespace oat
