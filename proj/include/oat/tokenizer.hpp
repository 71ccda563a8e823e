// SPDX-License-Identifier: Apache-2.0
#pragma once

// Geometric per-cell latents, bottom-up propagation, k-means codebook
// fitting, and multi-scale residual quantization over the octree: the root
// latent is quantized directly, every other node quantizes the residual
// against its parent's accumulated latent, and accumulated sums recover the
// per-node latent at decode time.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "oat/octree.hpp"

namespace oat {

// 8-d geometric cell descriptor:
//   [0..2] quadric minimizer in cell-local coordinates
//   [3..5] mean point normal (unnormalized)
//   [6]    sqrt of the cell error, clipped to [0, 1]
//   [7]    fraction of the cloud inside the cell
using Latent8 = std::array<double, 8>;

inline Latent8 operator+(const Latent8& a, const Latent8& b) {
    Latent8 r;
    for (int i = 0; i < 8; ++i) r[i] = a[i] + b[i];
    return r;
}
inline Latent8 operator-(const Latent8& a, const Latent8& b) {
    Latent8 r;
    for (int i = 0; i < 8; ++i) r[i] = a[i] - b[i];
    return r;
}
inline double distance2(const Latent8& a, const Latent8& b) {
    double d = 0.0;
    for (int i = 0; i < 8; ++i) {
        double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

// Latents for every node: leaves from their own points, internal nodes as
// the unweighted mean of their children (bottom-up).
std::vector<Latent8> leaf_latents(const AdaptiveOctree& tree);
void propagate_latents(const AdaptiveOctree& tree, std::vector<Latent8>& latents);

struct Codebook {
    std::vector<Latent8> entries;
    uint32_t iterations = 0;
    uint64_t seed = 0;

    size_t size() const { return entries.size(); }
    // FNV-1a over the entries' f32 little-endian bytes (the serialized form,
    // so the hash survives a file round-trip).
    uint64_t hash() const;
    // Entries flattened row-major for the nearest-entry kernel.
    std::vector<double> flat() const;
};

// Unquantized residuals that seed codebook fitting: the root latent of each
// tree plus child-minus-parent differences.
std::vector<Latent8> residual_pool(const AdaptiveOctree& tree, const std::vector<Latent8>& latents);

// k-means with k++ seeding on a pooled residual set. Deterministic given
// seed; empty clusters re-seed from the farthest point. Throws InputError
// when the pool has fewer than k distinct vectors. objective_history, when
// given, receives the assignment objective at each iteration.
Codebook fit_codebook(const std::vector<Latent8>& residuals, size_t k, size_t iterations,
                      uint64_t seed, std::vector<double>* objective_history = nullptr);

// "OATC": u32 K, u32 dim=8, K x 8 f32 little-endian, u64 self-hash.
void write_codebook(const Codebook& cb, const std::string& path);
Codebook read_codebook(const std::string& path);

struct ResidualCodes {
    std::vector<uint32_t> q;      // codebook index per node (BFS order)
    std::vector<Latent8> z;       // quantized residual = codebook[q]
    std::vector<Latent8> z_acc;   // accumulated latent along the root path
    std::vector<Latent8> phi_hat; // recovered latent (== z_acc)
};

// Multi-scale octree residual quantization, level by level in BFS order.
ResidualCodes residual_quantize(const AdaptiveOctree& tree, const std::vector<Latent8>& latents,
                                const Codebook& codebook);

// Recomputes accumulated latents from the quantized residuals alone.
std::vector<Latent8> accumulate_latents(const AdaptiveOctree& tree,
                                        const std::vector<Latent8>& z);

struct TokenHeader {
    int max_depth = 6;
    double threshold = 0.0;
    uint64_t codebook_hash = 0;
};

struct TokenSequence {
    TokenHeader header;
    std::vector<uint16_t> q;
    std::vector<uint8_t> chi;
    std::vector<TreePe> pe;

    size_t size() const { return q.size(); }
};

inline constexpr size_t kDefaultTokenCap = 2048;

TokenSequence encode_tokens(const AdaptiveOctree& tree, const ResidualCodes& codes,
                            uint64_t codebook_hash);

// "OAT1": u8 version=1, u8 L, f32 T, u64 codebook hash, u32 node count,
// then per node u16 q + u8 chi. Writing a sequence longer than max_tokens
// is a cap-exceeded error; trim the tree first.
void write_tokens(const TokenSequence& seq, const std::string& path,
                  size_t max_tokens = kDefaultTokenCap);
TokenSequence read_tokens(const std::string& path);

uint64_t fnv1a(const void* data, size_t n, uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace oat
