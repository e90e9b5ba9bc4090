#pragma once

#include <span>
#include <string>
#include <vector>

#include "cek/instance.hpp"

namespace cek {

struct LemmaViolation {
    std::string instance;  // serialized offender
    std::string witness;   // the partition / set / optimum involved
    std::string lhs;
    std::string rhs;
};

struct LemmaReport {
    std::string lemma_id;
    long instances_checked = 0;
    std::vector<LemmaViolation> violations;
    bool pass() const { return violations.empty(); }
    void merge(const LemmaReport& other);
};

struct LabOptions {
    // Test hook: shifts the whole-graph optimum used inside the checks.
    // A nonzero value must make the suite report violations; the failure
    // path of the verification pipeline is tested through it.
    int oracle_bias_units = 0;
};

// Empirical checks of the cutting lemmas on oracle-sized graphs (at most
// 10 alive vertices; larger inputs are refused). Every optimum is obtained
// by brute-force enumeration, and the universally quantified statements
// are checked against the full list of optimal clusterings.

// sum_i w(G[V_i]) <= w(G) <= pi(E_P) + sum_i w(G[V_i])
LemmaReport check_cutting_lemma(const Instance& g, const Clustering& p,
                                const LabOptions& opts = {});

// w(G[X]) + w(G[~X]) <= w(G) <= w(G[X]) + w(G[~X]) + gamma(X)
LemmaReport check_two_cut(const Instance& g, std::span<const VertexId> x,
                          const LabOptions& opts = {});

// every optimum S*: pi(S*(X, ~X)) <= gamma(X)
LemmaReport check_cut_preferred(const Instance& g, std::span<const VertexId> x,
                                const LabOptions& opts = {});

// every optimum S*: w(G) >= w(G[X]) + pi(S*(V, ~X))
LemmaReport check_edge_cutting(const Instance& g, std::span<const VertexId> x,
                               const LabOptions& opts = {});

// every optimum S*: w(G) + pi(S*(B_X)) >= w(G[X]) + w(G[~X u B_X])
LemmaReport check_boundary_lemma(const Instance& g, std::span<const VertexId> x,
                                 const LabOptions& opts = {});

// some optimum places all of N[v] in one cluster; v must be reducible
LemmaReport check_nonseparable(const Instance& g, VertexId v, const LabOptions& opts = {});

struct CorpusOptions {
    uint64_t seed = 0xCE17;
    int trials = 1000;  // per lemma
    int n_min = 4;
    int n_max = 8;
    std::vector<double> edge_probs = {0.2, 0.5, 0.8};
    int weight_max = 4;
    LabOptions lab;
};

// Runs all six checks over a seeded Erdos-Renyi corpus. Trial shards are
// independent and run in parallel; reports are merged in trial order.
std::vector<LemmaReport> run_lemma_corpus(const CorpusOptions& opts);

}  // namespace cek
