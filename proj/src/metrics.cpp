// SPDX-License-Identifier: Apache-2.0

#include "oat/metrics.hpp"

#include <cmath>

#include "json.hpp"

#include "oat/error.hpp"
#include "oat/kernels.hpp"

namespace oat {

double iou(const OccupancyGrid& a, const OccupancyGrid& b) {
    if (a.resolution != b.resolution)
        throw InputError("iou: grid resolutions differ");
    size_t inter = 0, uni = 0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        inter += a.values[i] & b.values[i];
        uni += a.values[i] | b.values[i];
    }
    if (uni == 0) return 1.0;
    return double(inter) / double(uni);
}

namespace {

double mean_nn_sq(const std::vector<float>& ax, const std::vector<float>& ay,
                  const std::vector<float>& az, const std::vector<float>& bx,
                  const std::vector<float>& by, const std::vector<float>& bz) {
    const auto& k = kernels::active();
    double sum = 0.0;
    for (size_t i = 0; i < ax.size(); ++i) {
        float d;
        k.nearest_point3(ax[i], ay[i], az[i], bx.data(), by.data(), bz.data(), bx.size(), &d);
        sum += double(d);
    }
    return sum / double(ax.size());
}

}  // namespace

double chamfer(const std::vector<float>& ax, const std::vector<float>& ay,
               const std::vector<float>& az, const std::vector<float>& bx,
               const std::vector<float>& by, const std::vector<float>& bz) {
    if (ax.empty() || bx.empty()) throw InputError("chamfer: empty point set");
    return 0.5 * (mean_nn_sq(ax, ay, az, bx, by, bz) + mean_nn_sq(bx, by, bz, ax, ay, az));
}

double chamfer(const OrientedPointCloud& a, const OrientedPointCloud& b) {
    return chamfer(a.px, a.py, a.pz, b.px, b.py, b.pz);
}

TokenStats token_stats(const TokenSequence& seq) {
    TokenStats st;
    st.token_count = seq.size();
    std::map<uint16_t, size_t> q_counts;
    for (size_t i = 0; i < seq.size(); ++i) {
        ++st.nodes_per_depth[seq.pe[i].d];
        if (seq.chi[i] == 0)
            ++st.leaf_count;
        else
            ++st.internal_count;
        ++q_counts[seq.q[i]];
    }
    double n = double(seq.size());
    for (const auto& [q, c] : q_counts) {
        double p = double(c) / n;
        st.q_entropy_bits -= p * std::log2(p);
    }
    return st;
}

std::string EvalReport::to_json() const {
    nlohmann::ordered_json j;
    if (iou >= 0.0)
        j["iou"] = iou;
    else
        j["iou"] = nullptr;
    if (chamfer >= 0.0)
        j["chamfer_x1e3"] = chamfer * 1e3;
    else
        j["chamfer_x1e3"] = nullptr;
    j["token_count"] = token_count;
    nlohmann::ordered_json depths = nlohmann::ordered_json::object();
    for (const auto& [d, c] : nodes_per_depth) depths[std::to_string(d)] = c;
    j["nodes_per_depth"] = depths;
    j["threshold"] = threshold;
    j["max_depth"] = max_depth;
    nlohmann::ordered_json rt = nlohmann::ordered_json::object();
    for (const auto& [k, v] : runtime_ms) rt[k] = v;
    j["runtime_ms"] = rt;
    if (!config.empty()) {
        nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
        for (const auto& [k, v] : config) cfg[k] = v;
        j["config"] = cfg;
    }
    return j.dump(2);
}

}  // namespace oat
