#pragma once

#include <span>
#include <vector>

#include "cek/instance.hpp"

namespace cek {

// Per-vertex closed-neighborhood statistics. stable_cost is the reduction
// criterion: a vertex is reducible when stable_cost beats |N[v]| (strictly
// in integer and unit mode, by at least one in real mode).
struct NeighborhoodStats {
    VertexId v = -1;
    int size = 0;              // |N[v]|
    Weight deficiency;         // total weight of absent pairs inside N[v]
    Weight cut;                // total weight of edges leaving N[v]
    Weight stable_cost;        // 2*deficiency + cut
};

// Direct computation, O(|N[v]| * n). Independent of the degree-sum route
// below; the tests hold the two together.
NeighborhoodStats stats(const Instance& g, VertexId v);

bool is_reducible(const Instance& g, VertexId v);
bool reducible_by(const NeighborhoodStats& s, Mode mode);

// Sum of present-pair weights at a vertex, split so that +inf edges stay
// countable: the cut formula needs exact subtraction.
struct WeightedDegree {
    int64_t finite_micro = 0;
    int32_t inf_edges = 0;
};

std::vector<WeightedDegree> weighted_degrees(const Instance& g);

// O(|N[v]|^2 + |N[v]|) given the degree table: one pass over the pairs
// inside N[v] yields the deficiency and the inside weight, and the cut
// falls out as sum(deg) - 2*inside.
NeighborhoodStats stats_with_degrees(const Instance& g, VertexId v,
                                     std::span<const WeightedDegree> deg);

// Same, scanning only `candidates`, an ascending superset of the alive
// vertex ids. Lets the kernelizer skip tombstones on its hot path.
NeighborhoodStats stats_with_degrees(const Instance& g, VertexId v,
                                     std::span<const WeightedDegree> deg,
                                     std::span<const VertexId> candidates);

// Statistics for every alive vertex, indexed by id (dead ids get a default
// entry). scan_stats parallelizes across vertices with OpenMP and must
// agree with scan_stats_serial entry for entry.
std::vector<NeighborhoodStats> scan_stats(const Instance& g);
std::vector<NeighborhoodStats> scan_stats_serial(const Instance& g);

}  // namespace cek
