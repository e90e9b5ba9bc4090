#include "cek/lemma_lab.hpp"

#include <algorithm>
#include <sstream>

#include "cek/errors.hpp"
#include "cek/generate.hpp"
#include "cek/io.hpp"
#include "cek/rng.hpp"
#include "cek/solver.hpp"
#include "cek/stats.hpp"

namespace cek {

void LemmaReport::merge(const LemmaReport& other) {
    instances_checked += other.instances_checked;
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

namespace {

constexpr int kLabLimit = 10;

void guard(const Instance& g) {
    if (g.alive_count() > kLabLimit)
        throw GuardError("lemma lab accepts at most " + std::to_string(kLabLimit) + " vertices");
}

Instance restrict_to(const Instance& g, std::span<const VertexId> keep) {
    Instance h = g;
    std::vector<uint8_t> in(g.vertex_limit(), 0);
    for (VertexId v : keep) in[v] = 1;
    for (VertexId v : g.vertices())
        if (!in[v]) h.kill(v);
    return h;
}

Weight omega(const Instance& g) { return brute_force_opt(g).opt_weight; }

Weight omega_biased(const Instance& g, const LabOptions& opts) {
    return omega(g) + Weight::from_units(opts.oracle_bias_units);
}

std::string describe_set(std::span<const VertexId> x) {
    std::ostringstream ss;
    ss << "X={";
    for (size_t i = 0; i < x.size(); ++i) ss << (i ? "," : "") << x[i];
    ss << "}";
    return ss.str();
}

std::string describe_clustering(const Clustering& c) {
    std::ostringstream ss;
    for (const auto& b : c.blocks) {
        ss << "{";
        for (size_t i = 0; i < b.size(); ++i) ss << (i ? "," : "") << b[i];
        ss << "}";
    }
    return ss.str();
}

void expect_le(LemmaReport& rep, const Instance& g, const std::string& witness, Weight lhs,
               Weight rhs) {
    if (lhs <= rhs) return;
    auto [compacted, remap] = g.compact();
    (void)remap;
    rep.violations.push_back({serialize(compacted), witness, lhs.str(), rhs.str()});
}

std::vector<VertexId> complement_of(const Instance& g, std::span<const VertexId> x) {
    std::vector<uint8_t> in(g.vertex_limit(), 0);
    for (VertexId v : x) in[v] = 1;
    std::vector<VertexId> out;
    for (VertexId v : g.vertices())
        if (!in[v]) out.push_back(v);
    return out;
}

// weight of the pairs of s with exactly one endpoint in x
Weight crossing_weight(const Instance& g, const EditSet& s, std::span<const VertexId> x) {
    std::vector<uint8_t> in(g.vertex_limit(), 0);
    for (VertexId v : x) in[v] = 1;
    Weight total = Weight::zero();
    for (const auto& p : s.pairs)
        if (in[p.a] != in[p.b]) total += g.weight(p.a, p.b);
    return total;
}

}  // namespace

LemmaReport check_cutting_lemma(const Instance& g, const Clustering& p, const LabOptions& opts) {
    guard(g);
    LemmaReport rep{"cutting-lemma", 1, {}};
    Weight parts_sum = Weight::zero();
    for (const auto& part : p.blocks) parts_sum += omega(restrict_to(g, part));

    Weight cross = Weight::zero();
    std::vector<int32_t> part_of(g.vertex_limit(), -1);
    for (size_t i = 0; i < p.blocks.size(); ++i)
        for (VertexId v : p.blocks[i]) part_of[v] = static_cast<int32_t>(i);
    auto ids = g.vertices();
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = i + 1; j < ids.size(); ++j)
            if (g.present(ids[i], ids[j]) && part_of[ids[i]] != part_of[ids[j]])
                cross += g.weight(ids[i], ids[j]);

    Weight whole = omega_biased(g, opts);
    std::string witness = "P=" + describe_clustering(p);
    expect_le(rep, g, witness, parts_sum, whole);
    expect_le(rep, g, witness, whole, cross + parts_sum);
    return rep;
}

LemmaReport check_two_cut(const Instance& g, std::span<const VertexId> x, const LabOptions& opts) {
    guard(g);
    LemmaReport rep{"two-cut", 1, {}};
    auto comp = complement_of(g, x);
    Weight inside = omega(restrict_to(g, x)) + omega(restrict_to(g, comp));
    Weight whole = omega_biased(g, opts);
    std::string witness = describe_set(x);
    expect_le(rep, g, witness, inside, whole);
    expect_le(rep, g, witness, whole, inside + cut_weight(g, x));
    return rep;
}

LemmaReport check_cut_preferred(const Instance& g, std::span<const VertexId> x,
                                const LabOptions& opts) {
    guard(g);
    LemmaReport rep{"cut-preferred", 1, {}};
    Weight bound = cut_weight(g, x) - Weight::from_units(opts.oracle_bias_units);
    auto result = brute_force_opt(g, true);
    for (const Clustering& opt : *result.all_optima) {
        EditSet s = clustering_to_edits(g, opt);
        expect_le(rep, g, describe_set(x) + " S*=" + describe_clustering(opt),
                  crossing_weight(g, s, x), bound);
    }
    return rep;
}

LemmaReport check_edge_cutting(const Instance& g, std::span<const VertexId> x,
                               const LabOptions& opts) {
    guard(g);
    LemmaReport rep{"edge-cutting", 1, {}};
    std::vector<uint8_t> in(g.vertex_limit(), 0);
    for (VertexId v : x) in[v] = 1;
    Weight part = omega(restrict_to(g, x));
    auto result = brute_force_opt(g, true);
    Weight whole = result.opt_weight - Weight::from_units(opts.oracle_bias_units);
    for (const Clustering& opt : *result.all_optima) {
        EditSet s = clustering_to_edits(g, opt);
        Weight touching = Weight::zero();  // pairs with an endpoint outside x
        for (const auto& pr : s.pairs)
            if (!in[pr.a] || !in[pr.b]) touching += g.weight(pr.a, pr.b);
        expect_le(rep, g, describe_set(x) + " S*=" + describe_clustering(opt), part + touching,
                  whole);
    }
    return rep;
}

LemmaReport check_boundary_lemma(const Instance& g, std::span<const VertexId> x,
                                 const LabOptions& opts) {
    guard(g);
    LemmaReport rep{"boundary", 1, {}};
    std::vector<uint8_t> in(g.vertex_limit(), 0);
    for (VertexId v : x) in[v] = 1;

    std::vector<VertexId> boundary;  // B_X: members of X adjacent to ~X
    for (VertexId v : x)
        for (VertexId u : g.vertices())
            if (!in[u] && g.present(u, v)) {
                boundary.push_back(v);
                break;
            }
    std::vector<uint8_t> in_b(g.vertex_limit(), 0);
    for (VertexId v : boundary) in_b[v] = 1;

    auto rest = complement_of(g, x);
    auto rest_plus_b = rest;
    rest_plus_b.insert(rest_plus_b.end(), boundary.begin(), boundary.end());

    Weight rhs = omega(restrict_to(g, x)) + omega(restrict_to(g, rest_plus_b));
    auto result = brute_force_opt(g, true);
    Weight whole = result.opt_weight - Weight::from_units(opts.oracle_bias_units);
    for (const Clustering& opt : *result.all_optima) {
        EditSet s = clustering_to_edits(g, opt);
        Weight inside_b = Weight::zero();
        for (const auto& pr : s.pairs)
            if (in_b[pr.a] && in_b[pr.b]) inside_b += g.weight(pr.a, pr.b);
        expect_le(rep, g, describe_set(x) + " S*=" + describe_clustering(opt), rhs,
                  whole + inside_b);
    }
    return rep;
}

LemmaReport check_nonseparable(const Instance& g, VertexId v, const LabOptions& opts) {
    guard(g);
    if (!is_reducible(g, v)) throw UsageError("check_nonseparable needs a reducible vertex");
    LemmaReport rep{"non-separable", 1, {}};
    auto nbhd = closed_neighborhood(g, v);
    auto result = brute_force_opt(g, true);
    auto optima = *result.all_optima;
    if (opts.oracle_bias_units != 0) optima.clear();  // oracle "lost" its optima

    bool found = false;
    for (const Clustering& opt : optima) {
        for (const auto& block : opt.blocks) {
            bool covers = std::all_of(nbhd.begin(), nbhd.end(), [&](VertexId u) {
                return std::count(block.begin(), block.end(), u) > 0;
            });
            if (covers) {
                found = true;
                break;
            }
        }
        if (found) break;
    }
    if (!found) {
        auto [compacted, remap] = g.compact();
        (void)remap;
        rep.violations.push_back({serialize(compacted), "v=" + std::to_string(v),
                                  "no optimum contains N[v]",
                                  std::to_string(optima.size()) + " optima"});
    }
    return rep;
}

namespace {

struct TrialInput {
    Instance g;
    std::vector<VertexId> x;
    Clustering p;
};

TrialInput make_trial(const CorpusOptions& opts, int lemma_index, int trial) {
    uint64_t s = SplitMix64::mix(opts.seed, static_cast<uint64_t>(lemma_index) * 1000003u +
                                                static_cast<uint64_t>(trial));
    SplitMix64 rng(s);
    int n = static_cast<int>(rng.uniform_int(opts.n_min, opts.n_max));
    double p = opts.edge_probs[static_cast<size_t>(
        rng.uniform_int(0, static_cast<int64_t>(opts.edge_probs.size()) - 1))];
    Instance g = gen_random(n, p, opts.weight_max, Mode::Integer, rng.next());

    TrialInput in{std::move(g), {}, {}};
    // deterministic corner cases first, then uniform draws
    if (trial == 0) {
        in.p.blocks.push_back(in.g.vertices());  // single part; X stays empty
    } else if (trial == 1) {
        in.x = in.g.vertices();
        for (VertexId v : in.x) in.p.blocks.push_back({v});
    } else if (trial == 2) {
        auto comps = connected_components(in.g);
        in.x = comps.front();
        in.p.blocks = comps;
    } else {
        std::vector<std::vector<VertexId>> buckets(static_cast<size_t>(n));
        for (VertexId v : in.g.vertices()) {
            if (rng.bernoulli(0.5)) in.x.push_back(v);
            buckets[static_cast<size_t>(rng.uniform_int(0, n - 1))].push_back(v);
        }
        for (auto& b : buckets)
            if (!b.empty()) in.p.blocks.push_back(std::move(b));
    }
    in.p.canonicalize();
    return in;
}

}  // namespace

std::vector<LemmaReport> run_lemma_corpus(const CorpusOptions& opts) {
    if (opts.trials < 0) throw UsageError("negative trial count");
    if (opts.n_min < 1 || opts.n_min > opts.n_max || opts.n_max > kLabLimit)
        throw UsageError("corpus sizes must satisfy 1 <= n_min <= n_max <= " +
                         std::to_string(kLabLimit));
    if (opts.edge_probs.empty()) throw UsageError("no edge probabilities");
    const char* names[6] = {"cutting-lemma", "two-cut",  "cut-preferred",
                            "edge-cutting",  "boundary", "non-separable"};
    std::vector<LemmaReport> totals(6);
    for (int l = 0; l < 6; ++l) totals[l].lemma_id = names[l];

    for (int l = 0; l < 6; ++l) {
        std::vector<LemmaReport> shard(static_cast<size_t>(opts.trials));
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < opts.trials; ++t) {
            TrialInput in = make_trial(opts, l, t);
            LemmaReport rep;
            switch (l) {
                case 0: rep = check_cutting_lemma(in.g, in.p, opts.lab); break;
                case 1: rep = check_two_cut(in.g, in.x, opts.lab); break;
                case 2: rep = check_cut_preferred(in.g, in.x, opts.lab); break;
                case 3: rep = check_edge_cutting(in.g, in.x, opts.lab); break;
                case 4: rep = check_boundary_lemma(in.g, in.x, opts.lab); break;
                case 5: {
                    rep = LemmaReport{"non-separable", 0, {}};
                    bool any = false;
                    for (VertexId v : in.g.vertices()) {
                        if (!is_reducible(in.g, v)) continue;
                        any = true;
                        rep.merge(check_nonseparable(in.g, v, opts.lab));
                    }
                    if (any) rep.instances_checked = 1;
                    break;
                }
            }
            shard[static_cast<size_t>(t)] = std::move(rep);
        }
        for (const auto& rep : shard) totals[static_cast<size_t>(l)].merge(rep);
    }
    return totals;
}

}  // namespace cek
