#pragma once

#include <optional>
#include <vector>

#include "cek/instance.hpp"
#include "cek/kernelize.hpp"

namespace cek {

struct OptResult {
    Weight opt_weight;  // +inf when no feasible solution exists
    std::optional<Clustering> witness;
    std::optional<std::vector<Clustering>> all_optima;  // brute force only
    uint64_t nodes_explored = 0;
};

// Maximum alive vertex count brute_force_opt accepts (Bell-number guard).
inline constexpr int kBruteForceLimit = 13;

// Enumerates every set partition of the alive vertices in restricted-growth
// lexicographic order, with incremental costs and bound pruning. With
// enumerate_all it collects every partition attaining the optimum, in
// enumeration order.
OptResult brute_force_opt(const Instance& g, bool enumerate_all = false);

// Conflict-triple branch and bound: pick the heaviest induced path on three
// vertices and branch on deleting either edge or inserting the missing one.
// +inf pairs make the corresponding branch unavailable. upper_bound, when
// given, must be achievable and tightens initial pruning.
OptResult branch_opt(const Instance& g, std::optional<Weight> upper_bound = {});

// Expands a kernel clustering back to the original vertex set using the
// kernel's provenance and the clusters dropped during reduction, and
// returns the edit set realizing it on the original graph. For an optimal
// kernel witness the result is an optimal solution of the original, with
// weight spent + witness weight.
EditSet lift_solution(const Instance& original, const KernelResult& r,
                      const Clustering& kernel_witness);

}  // namespace cek
