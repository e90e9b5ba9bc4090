#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cek/instance.hpp"
#include "cek/stats.hpp"

namespace cek {

enum class RuleId { S1, S2, S3, S3U, S3R, CliqueDrop };

const char* rule_name(RuleId r);

// One committed reduction step. The three steps fired at a single pivot
// share an application index; clique drops triggered by that application
// carry the same index. Vertex ids are stable working ids: originals first,
// fresh vertices above them.
struct TraceStep {
    RuleId rule;
    int application = 0;
    VertexId pivot = -1;  // -1 for clique drops
    std::vector<VertexPair> inserted;
    std::vector<VertexPair> deleted;
    std::vector<VertexId> removed;
    std::vector<VertexId> created;
    Weight cost;
};

struct ReductionTrace {
    std::vector<TraceStep> steps;
    Weight total_cost() const;
};

// Where an input vertex ended up.
struct VertexFate {
    enum Kind { Representative, Deleted, Replaced } kind = Deleted;
    VertexId representative = -1;  // kernel id, valid for Representative
};

struct KernelResult {
    Instance kernel;  // compacted, alive vertices only
    Weight spent;
    ReductionTrace trace;
    std::vector<VertexFate> vertex_map;  // indexed by original id
    // Clique components removed along the way, as clusters of original ids.
    // Together with the kernel vertices' expansions these partition the
    // original vertex set; solution lifting rebuilds clusterings from them.
    std::vector<std::vector<VertexId>> dropped_clusters;
};

// Called after every committed trace step with the working graph and the
// cost spent so far. Lets tests check prefix safety step by step.
using StepObserver =
    std::function<void(const Instance& current, const TraceStep& step, Weight spent)>;

struct KernelizeOptions {
    StepObserver observer;
};

// Applies the reduction rule to a fixpoint: pick the lowest-id reducible
// vertex, run steps 1-3 there as one atomic application, drop clique
// components, repeat until nothing is reducible.
KernelResult kernelize(const Instance& g, const KernelizeOptions& opts = {});

struct DecideResult {
    enum Answer { Yes, No, KernelOnly } answer;
    Weight residual;  // k - spent; meaningful for Yes and KernelOnly
    KernelResult result;
};

// Parameterized decision via the kernel-size bound: spent > k is a no,
// an empty kernel is a yes, a kernel above 2(k-spent) vertices (4(k-spent)
// in real mode, the factor the relaxed threshold actually supports) is a
// no, anything else is returned for exact solving.
DecideResult decide(const Instance& g, Weight k);

// Single-step entry points, mirroring the phases of one rule application.
// Each returns the edited graph (tombstones kept, ids stable) and the cost
// spent. The step-3 variants expect the graph state steps 1-2 leave behind
// and throw ContractViolation when there is not exactly one survivor.
std::pair<Instance, Weight> step1_complete(const Instance& g, VertexId v);
std::pair<Instance, Weight> step2_prune(const Instance& g, VertexId v);
std::pair<Instance, Weight> step3_merge(const Instance& g, VertexId v);
std::pair<Instance, Weight> step3_unweighted(const Instance& g, VertexId v);
std::pair<Instance, Weight> step3_real(const Instance& g, VertexId v);
std::pair<Instance, Weight> drop_clique_components(const Instance& g);

}  // namespace cek
