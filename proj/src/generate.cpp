#include "cek/generate.hpp"

#include <algorithm>
#include <set>

#include "cek/errors.hpp"
#include "cek/rng.hpp"

namespace cek {

namespace {

Weight draw_weight(SplitMix64& rng, Mode mode, int64_t weight_max) {
    switch (mode) {
        case Mode::Unit: return Weight::one();
        case Mode::Integer: return Weight::from_units(rng.uniform_int(1, weight_max));
        case Mode::Real:
            return Weight::from_micro(Weight::kScale +
                                      rng.uniform_int(0, (weight_max - 1) * Weight::kScale));
    }
    throw ContractViolation("unreachable");
}

// Pair states are drawn in triangular order (v ascending, u < v), presence
// first, weight second: the reproducibility contract for a given seed.
void fill_pairs(Instance& g, SplitMix64& rng, Mode mode, int64_t weight_max,
                const std::vector<int32_t>& block_of, double p) {
    for (VertexId v = 1; v < g.vertex_limit(); ++v) {
        for (VertexId u = 0; u < v; ++u) {
            bool present = block_of.empty() ? rng.bernoulli(p) : block_of[u] == block_of[v];
            g.set_pair(u, v, present, draw_weight(rng, mode, weight_max));
        }
    }
}

}  // namespace

std::pair<Instance, Clustering> gen_planted(const PlantedSpec& spec) {
    if (spec.n < 0 || spec.cluster_count < 1 || spec.cluster_count > std::max(spec.n, 1))
        throw UsageError("cluster_count must be in [1, n]");
    int64_t total_pairs = static_cast<int64_t>(spec.n) * (spec.n - 1) / 2;
    if (spec.edit_budget < 0 || spec.edit_budget > total_pairs)
        throw UsageError("edit_budget exceeds the number of pairs");
    if (spec.weight_max < 1) throw UsageError("weight_max must be at least 1");

    SplitMix64 rng(spec.seed);

    std::vector<VertexId> order(static_cast<size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i) order[static_cast<size_t>(i)] = i;
    rng.shuffle(order);

    std::vector<int32_t> block_of(static_cast<size_t>(spec.n));
    Clustering planted;
    int base = spec.n / spec.cluster_count;
    int extra = spec.n % spec.cluster_count;
    size_t at = 0;
    for (int b = 0; b < spec.cluster_count; ++b) {
        int size = base + (b < extra ? 1 : 0);
        std::vector<VertexId> block;
        for (int i = 0; i < size; ++i) {
            block_of[static_cast<size_t>(order[at])] = b;
            block.push_back(order[at]);
            ++at;
        }
        if (!block.empty()) planted.blocks.push_back(std::move(block));
    }
    planted.canonicalize();

    Instance g(spec.n, spec.mode);
    fill_pairs(g, rng, spec.mode, spec.weight_max, block_of, 0.0);

    std::set<int64_t> flipped;
    while (static_cast<int>(flipped.size()) < spec.edit_budget) {
        int64_t idx = rng.uniform_int(0, total_pairs - 1);
        if (!flipped.insert(idx).second) continue;
        // invert the triangular index
        VertexId v = 1;
        while (static_cast<int64_t>(v) * (v + 1) / 2 <= idx) ++v;
        VertexId u = static_cast<VertexId>(idx - static_cast<int64_t>(v) * (v - 1) / 2);
        g.set_present(u, v, !g.present(u, v));
    }
    return {std::move(g), std::move(planted)};
}

Instance gen_random(int n, double p, int64_t weight_max, Mode mode, uint64_t seed) {
    if (n < 0) throw UsageError("negative vertex count");
    if (p < 0.0 || p > 1.0) throw UsageError("edge probability outside [0,1]");
    if (weight_max < 1) throw UsageError("weight_max must be at least 1");
    SplitMix64 rng(seed);
    Instance g(n, mode);
    fill_pairs(g, rng, mode, weight_max, {}, p);
    return g;
}

}  // namespace cek
