#pragma once

#include <cstdint>
#include <utility>

#include "cek/instance.hpp"

namespace cek {

// Planted-cluster instance: disjoint cliques over a shuffled balanced
// partition, weights drawn uniformly from [1, weight_max], then edit_budget
// distinct pairs flipped. The planted partition is a feasible repair, so
// its flipped weight upper-bounds the optimum.
struct PlantedSpec {
    int n = 0;
    int cluster_count = 1;
    int edit_budget = 0;
    int64_t weight_max = 1;  // whole units; real mode draws from the continuum
    Mode mode = Mode::Integer;
    uint64_t seed = 0;
};

std::pair<Instance, Clustering> gen_planted(const PlantedSpec& spec);

// Erdos-Renyi: each pair present independently with probability p, weights
// uniform in [1, weight_max] (integers in integer mode, micro-exact reals
// in real mode, 1 in unit mode).
Instance gen_random(int n, double p, int64_t weight_max, Mode mode, uint64_t seed);

}  // namespace cek
