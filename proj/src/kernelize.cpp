#include "cek/kernelize.hpp"

#include <algorithm>

#include "cek/errors.hpp"

namespace cek {

const char* rule_name(RuleId r) {
    switch (r) {
        case RuleId::S1: return "S1";
        case RuleId::S2: return "S2";
        case RuleId::S3: return "S3";
        case RuleId::S3U: return "S3U";
        case RuleId::S3R: return "S3R";
        case RuleId::CliqueDrop: return "DROP";
    }
    return "?";
}

Weight ReductionTrace::total_cost() const {
    Weight total = Weight::zero();
    for (const auto& s : steps) total += s.cost;
    return total;
}

namespace {

std::vector<VertexId> merged_expansion(const Instance& g, const std::vector<VertexId>& members) {
    std::vector<VertexId> e;
    for (VertexId u : members) {
        const auto& part = g.expansion(u);
        e.insert(e.end(), part.begin(), part.end());
    }
    std::sort(e.begin(), e.end());
    return e;
}

// Working state for one kernelization run. The pair table stays the source
// of truth; the kernelizer keeps adjacency lists, weighted degrees and
// cached neighborhood statistics on the side so that the hot path never
// scans a full matrix row. Edits invalidate exactly the vertices whose
// statistics can change: those whose closed neighborhood touches an edited
// pair. Adjacency lists are maintained on every edit; dead ids linger in
// them and are filtered on read.
class Kernelizer {
public:
    Kernelizer(const Instance& g, KernelizeOptions opts) : g_(g), opts_(std::move(opts)) {
        build_adjacency();
        rebuild_super();
    }

    Instance& graph() { return g_; }
    Weight spent() const { return spent_; }

    KernelResult run() {
        init_stat_caches();

        // Every pivot iteration removes at least one vertex by the time the
        // next pivot is selected: step 3 contracts or replaces, and a pivot
        // without a survivor leaves N[v] an isolated clique for the drop
        // pass. Hence at most n iterations.
        int alive_at_last_pivot = -1;
        while (true) {
            rebuild_super();
            refresh_dirty_stats();
            drop_isolated_cliques();
            VertexId pivot = -1;
            for (VertexId v : alive_super_) {
                if (g_.alive(v) && reducible_by(stats_[v], g_.mode())) {
                    pivot = v;
                    break;
                }
            }
            if (pivot < 0) break;
            if (alive_at_last_pivot >= 0 && g_.alive_count() >= alive_at_last_pivot)
                throw ContractViolation("reduction is not making progress");
            alive_at_last_pivot = g_.alive_count();
            ++application_;
            apply_rule(pivot);
        }

        return finish();
    }

    // Single-step entry points used by the public wrappers. No stat caches.
    Weight run_step1(VertexId v) {
        ++application_;
        return apply_step1(v, nbhd_of(v));
    }
    Weight run_step2(VertexId v) {
        ++application_;
        auto nbhd = nbhd_of(v);
        auto [cost, survivors] = apply_step2(v, nbhd);
        (void)survivors;
        return cost;
    }
    Weight run_step3(VertexId v, Mode expect) {
        if (g_.mode() != expect)
            throw ContractViolation("step-3 variant does not match the instance mode");
        ++application_;
        auto nbhd = nbhd_of(v);
        auto survivors = attached_outsiders(nbhd);
        if (survivors.size() != 1)
            throw ContractViolation("step 3 needs exactly one surviving outside vertex, got " +
                                    std::to_string(survivors.size()));
        return apply_step3(v, nbhd, survivors[0]);
    }
    Weight run_drop_all() {
        ++application_;
        for (const auto& comp : connected_components(g_))
            if (component_is_clique(comp)) drop_component(comp);
        return Weight::zero();
    }

private:
    // ---- adjacency and alive bookkeeping -----------------------------------

    // One streaming pass over the triangular table.
    void build_adjacency() {
        nbrs_.assign(g_.vertex_limit(), {});
        for (VertexId v = 1; v < g_.vertex_limit(); ++v) {
            if (!g_.alive(v)) continue;
            for (VertexId u = 0; u < v; ++u) {
                if (!g_.alive(u) || !g_.present(u, v)) continue;
                nbrs_[u].push_back(v);
                nbrs_[v].push_back(u);
            }
        }
    }

    void init_stat_caches() {
        tracking_ = true;
        deg_.assign(g_.vertex_limit(), WeightedDegree{});
        for (VertexId v = 0; v < g_.vertex_limit(); ++v) {
            if (!g_.alive(v)) continue;
            for (VertexId u : nbrs_[v]) {
                Weight w = g_.weight(u, v);
                if (w.infinite())
                    ++deg_[v].inf_edges;
                else
                    deg_[v].finite_micro += w.micro();
            }
        }
        stats_.assign(g_.vertex_limit(), NeighborhoodStats{});
        fresh_.assign(g_.vertex_limit(), 1);
        rebuild_super();
        const int64_t count = static_cast<int64_t>(alive_super_.size());
#pragma omp parallel for schedule(dynamic, 16) if (count > 64)
        for (int64_t i = 0; i < count; ++i)
            stats_[alive_super_[i]] = compute_stats(alive_super_[i]);
    }

    // Ascending superset of the alive ids; kills leave stale entries that
    // every consumer filters, fresh vertices are appended on creation.
    void rebuild_super() {
        alive_super_.clear();
        for (VertexId v = 0; v < g_.vertex_limit(); ++v)
            if (g_.alive(v)) alive_super_.push_back(v);
    }

    // Closed neighborhood, ascending. The adjacency list may hold dead ids;
    // presence is re-checked against the table as a cheap shield.
    std::vector<VertexId> nbhd_of(VertexId v) const {
        std::vector<VertexId> nbhd{v};
        for (VertexId u : nbrs_[v])
            if (g_.alive(u) && g_.present(u, v)) nbhd.push_back(u);
        std::sort(nbhd.begin(), nbhd.end());
        return nbhd;
    }

    // Alive vertices outside nbhd with at least one edge into it, ascending.
    std::vector<VertexId> attached_outsiders(const std::vector<VertexId>& nbhd) const {
        std::vector<VertexId> out;
        for (VertexId u : nbhd)
            for (VertexId x : nbrs_[u])
                if (g_.alive(x) && g_.present(u, x)) out.push_back(x);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        std::vector<VertexId> filtered;
        for (VertexId x : out)
            if (!std::binary_search(nbhd.begin(), nbhd.end(), x)) filtered.push_back(x);
        return filtered;
    }

    NeighborhoodStats compute_stats(VertexId v) const {
        auto nbhd = nbhd_of(v);
        NeighborhoodStats s;
        s.v = v;
        s.size = static_cast<int>(nbhd.size());

        int64_t inside_finite = 0;
        int64_t inside_inf = 0;
        for (size_t i = 0; i < nbhd.size(); ++i) {
            for (size_t j = i + 1; j < nbhd.size(); ++j) {
                PairState p = g_.pair(nbhd[i], nbhd[j]);
                if (p.present) {
                    if (p.weight.infinite())
                        ++inside_inf;
                    else
                        inside_finite += p.weight.micro();
                } else {
                    s.deficiency += p.weight;
                }
            }
        }
        int64_t sum_finite = 0;
        int64_t sum_inf = 0;
        for (VertexId u : nbhd) {
            sum_finite += deg_[u].finite_micro;
            sum_inf += deg_[u].inf_edges;
        }
        // inside pairs are counted in both endpoints' degrees, boundary once
        int64_t boundary_inf = sum_inf - 2 * inside_inf;
        s.cut = boundary_inf > 0 ? Weight::infinity()
                                 : Weight::from_micro(sum_finite - 2 * inside_finite);
        s.stable_cost = 2 * s.deficiency + s.cut;
        return s;
    }

    // ---- edit primitives -------------------------------------------------

    void note_degree(VertexId a, Weight w, int sign) {
        if (!tracking_) return;
        if (w.infinite())
            deg_[a].inf_edges += sign;
        else
            deg_[a].finite_micro += sign * w.micro();
    }

    void mark_neighborhood_dirty(VertexId a) {
        if (!tracking_) return;
        fresh_[a] = 0;
        for (VertexId u : nbrs_[a])
            if (g_.alive(u)) fresh_[u] = 0;
    }

    void insert_pair(VertexId a, VertexId b) {
        g_.toggle(a, b);
        nbrs_[a].push_back(b);
        nbrs_[b].push_back(a);
        Weight w = g_.weight(a, b);
        note_degree(a, w, +1);
        note_degree(b, w, +1);
        mark_neighborhood_dirty(a);
        mark_neighborhood_dirty(b);
    }

    void delete_pair(VertexId a, VertexId b) {
        Weight w = g_.weight(a, b);
        mark_neighborhood_dirty(a);  // neighborhoods before the cut
        mark_neighborhood_dirty(b);
        g_.toggle(a, b);
        std::erase(nbrs_[a], b);
        std::erase(nbrs_[b], a);
        note_degree(a, w, -1);
        note_degree(b, w, -1);
    }

    void recompute_degree(VertexId v) {
        if (!tracking_) return;
        WeightedDegree d;
        for (VertexId u : nbrs_[v]) {
            if (!g_.alive(u) || !g_.present(u, v)) continue;
            Weight w = g_.weight(u, v);
            if (w.infinite())
                ++d.inf_edges;
            else
                d.finite_micro += w.micro();
        }
        deg_[v] = d;
    }

    void refresh_dirty_stats() {
        if (!tracking_) return;
        std::vector<VertexId> dirty;
        for (VertexId v : alive_super_)
            if (g_.alive(v) && !fresh_[v]) dirty.push_back(v);
        const int64_t count = static_cast<int64_t>(dirty.size());
#pragma omp parallel for schedule(dynamic, 8) if (count > 32)
        for (int64_t i = 0; i < count; ++i) stats_[dirty[i]] = compute_stats(dirty[i]);
        for (VertexId v : dirty) fresh_[v] = 1;
    }

    void commit(TraceStep step) {
        spent_ += step.cost;
        if (opts_.observer) opts_.observer(g_, step, spent_);
        trace_.steps.push_back(std::move(step));
    }

    // ---- the three steps ---------------------------------------------------

    Weight apply_step1(VertexId v, const std::vector<VertexId>& nbhd) {
        TraceStep step{RuleId::S1, application_, v, {}, {}, {}, {}, Weight::zero()};
        for (size_t i = 0; i < nbhd.size(); ++i) {
            for (size_t j = i + 1; j < nbhd.size(); ++j) {
                if (g_.present(nbhd[i], nbhd[j])) continue;
                Weight w = g_.weight(nbhd[i], nbhd[j]);
                if (w.infinite())
                    throw ContractViolation("step 1 at a pivot with infinite deficiency");
                insert_pair(nbhd[i], nbhd[j]);
                step.inserted.emplace_back(nbhd[i], nbhd[j]);
                step.cost += w;
            }
        }
        Weight cost = step.cost;
        if (!step.inserted.empty()) commit(std::move(step));
        return cost;
    }

    // Deletes the cheap outside connections; returns (cost, survivors).
    std::pair<Weight, std::vector<VertexId>> apply_step2(VertexId v,
                                                         const std::vector<VertexId>& nbhd) {
        int64_t half_threshold = static_cast<int64_t>(nbhd.size()) * Weight::kScale;

        Weight total = Weight::zero();
        std::vector<VertexId> survivors;
        for (VertexId x : attached_outsiders(nbhd)) {
            Weight cut = Weight::zero();
            std::vector<VertexId> attached;
            for (VertexId u : nbhd) {
                if (g_.present(x, u)) {
                    cut += g_.weight(x, u);
                    attached.push_back(u);
                }
            }
            if (attached.empty()) continue;
            // pi(E(x, N[v])) <= |N[v]| / 2, ties delete
            bool prune = cut.finite() && 2 * cut.micro() <= half_threshold;
            if (!prune) {
                survivors.push_back(x);
                continue;
            }
            TraceStep step{RuleId::S2, application_, v, {}, {}, {}, {}, cut};
            for (VertexId u : attached) {
                delete_pair(x, u);
                step.deleted.emplace_back(x, u);
            }
            total += cut;
            commit(std::move(step));
        }
        return {total, survivors};
    }

    struct Split {
        std::vector<VertexId> x_side;  // N[v] members adjacent to the survivor
        std::vector<VertexId> y_side;
        Weight c_x;  // weight of edges between survivor and x_side
        Weight c_y;  // weight of absent pairs between survivor and y_side
    };

    Split split_by_survivor(const std::vector<VertexId>& nbhd, VertexId x) const {
        Split s;
        s.c_x = Weight::zero();
        s.c_y = Weight::zero();
        for (VertexId u : nbhd) {
            if (g_.present(x, u)) {
                s.x_side.push_back(u);
                s.c_x += g_.weight(x, u);
            } else {
                s.y_side.push_back(u);
                s.c_y += g_.weight(x, u);
            }
        }
        return s;
    }

    // Disconnect fallback for c_X <= c_Y: cutting the survivor off is at
    // least as good as connecting it, and it keeps merge weights positive.
    // The clique N[v] becomes isolated and is dropped afterwards.
    Weight disconnect_survivor(VertexId v, const Split& s, VertexId x) {
        TraceStep step{RuleId::S3, application_, v, {}, {}, {}, {}, s.c_x};
        for (VertexId u : s.x_side) {
            delete_pair(x, u);
            step.deleted.emplace_back(x, u);
        }
        Weight cost = step.cost;
        commit(std::move(step));
        return cost;
    }

    // Contracts N[v] into the pivot's slot; afterwards the only editable
    // pair at v' is the edge to the survivor.
    void contract_into_pivot(VertexId v, const std::vector<VertexId>& nbhd, VertexId x,
                             Weight edge_weight) {
        g_.set_expansion(v, merged_expansion(g_, nbhd));
        for (VertexId u : nbhd)
            if (u != v) g_.kill(u);
        for (VertexId w : alive_super_) {
            if (w == v || !g_.alive(w)) continue;
            if (w == x)
                g_.set_pair(v, x, true, edge_weight);
            else
                g_.set_pair(v, w, false, Weight::infinity());
        }
        nbrs_[v] = {x};
        nbrs_[x].push_back(v);
        recompute_degree(v);
        recompute_degree(x);
        mark_neighborhood_dirty(x);
        mark_neighborhood_dirty(v);
    }

    Weight merge_integer(VertexId v, const std::vector<VertexId>& nbhd, const Split& s,
                         VertexId x, RuleId rule) {
        TraceStep step{rule, application_, v, {}, {}, {}, {}, s.c_y};
        step.removed.assign(nbhd.begin(), nbhd.end());
        std::erase(step.removed, v);
        contract_into_pivot(v, nbhd, x, s.c_x - s.c_y);
        commit(std::move(step));
        return s.c_y;
    }

    // Real-mode two-vertex gadget for 0 < c_X - c_Y < 1. The pair {v', x}
    // gets weight 2 and {v', v''} gets 2 - (c_X - c_Y), so cutting v' off x
    // still costs c_X in total and keeping it still costs c_Y once the
    // returned budget c_X - 2 (possibly negative) is accounted.
    Weight merge_real_gadget(VertexId v, const std::vector<VertexId>& nbhd, const Split& s,
                             VertexId x) {
        Weight cost = s.c_x - Weight::from_units(2);
        TraceStep step{RuleId::S3R, application_, v, {}, {}, {}, {}, cost};
        step.removed.assign(nbhd.begin(), nbhd.end());
        std::erase(step.removed, v);

        contract_into_pivot(v, nbhd, x, Weight::from_units(2));
        VertexId twin = g_.add_vertex(true, {});
        step.created.push_back(twin);
        grow_caches();
        for (VertexId w : alive_super_) {
            if (w == v || !g_.alive(w)) continue;
            g_.set_pair(w, twin, false, Weight::infinity());
        }
        g_.set_pair(v, twin, true, Weight::from_units(2) - (s.c_x - s.c_y));
        nbrs_[twin] = {v};
        nbrs_[v].push_back(twin);
        alive_super_.push_back(twin);
        recompute_degree(v);
        recompute_degree(twin);
        mark_neighborhood_dirty(v);
        commit(std::move(step));
        return cost;
    }

    // Unit-mode replacement: N[v] becomes a fresh clique of |X| - |Y|
    // vertices attached to the survivor. The first fresh vertex carries the
    // provenance of the whole replaced set.
    Weight replace_unweighted(VertexId v, const std::vector<VertexId>& nbhd, const Split& s,
                              VertexId x) {
        int fresh_count = static_cast<int>(s.x_side.size()) - static_cast<int>(s.y_side.size());
        if (fresh_count <= 0)
            throw ContractViolation("unweighted replacement with |X| <= |Y|");

        Weight cost = Weight::from_units(static_cast<int64_t>(s.y_side.size()));
        TraceStep step{RuleId::S3U, application_, v, {}, {}, {}, {}, cost};
        step.removed.assign(nbhd.begin(), nbhd.end());

        auto expansion = merged_expansion(g_, nbhd);
        for (VertexId u : nbhd) g_.kill(u);

        std::vector<VertexId> fresh;
        for (int i = 0; i < fresh_count; ++i) {
            VertexId f = g_.add_vertex(true, i == 0 ? std::move(expansion)
                                                    : std::vector<VertexId>{});
            g_.set_replace_group(f, application_);
            fresh.push_back(f);
            grow_caches();
        }
        for (size_t i = 0; i < fresh.size(); ++i) {
            g_.set_pair(fresh[i], x, true, Weight::one());
            nbrs_[fresh[i]] = fresh;
            std::erase(nbrs_[fresh[i]], fresh[i]);
            nbrs_[fresh[i]].push_back(x);
            nbrs_[x].push_back(fresh[i]);
            for (size_t j = i + 1; j < fresh.size(); ++j)
                g_.set_pair(fresh[i], fresh[j], true, Weight::one());
        }
        alive_super_.insert(alive_super_.end(), fresh.begin(), fresh.end());
        step.created = fresh;
        for (VertexId f : fresh) recompute_degree(f);
        recompute_degree(x);
        mark_neighborhood_dirty(x);
        commit(std::move(step));
        return cost;
    }

    Weight apply_step3(VertexId v, const std::vector<VertexId>& nbhd, VertexId x) {
        Split s = split_by_survivor(nbhd, x);
        switch (g_.mode()) {
            case Mode::Integer:
                if (s.c_x <= s.c_y) return disconnect_survivor(v, s, x);
                return merge_integer(v, nbhd, s, x, RuleId::S3);
            case Mode::Unit:
                if (s.c_x <= s.c_y) return disconnect_survivor(v, s, x);
                return replace_unweighted(v, nbhd, s, x);
            case Mode::Real:
                if (s.c_x <= s.c_y) return disconnect_survivor(v, s, x);
                if (s.c_x - s.c_y >= Weight::one())
                    return merge_integer(v, nbhd, s, x, RuleId::S3R);
                return merge_real_gadget(v, nbhd, s, x);
        }
        throw ContractViolation("unreachable");
    }

    void grow_caches() {
        nbrs_.push_back({});
        if (tracking_) {
            deg_.push_back(WeightedDegree{});
            stats_.push_back(NeighborhoodStats{});
            fresh_.push_back(0);
        }
    }

    void apply_rule(VertexId v) {
        auto nbhd = nbhd_of(v);
        apply_step1(v, nbhd);
        auto [cost2, survivors] = apply_step2(v, nbhd);
        (void)cost2;
        if (survivors.size() > 1)
            throw ContractViolation("more than one outside vertex survived step 2");
        if (survivors.size() == 1) apply_step3(v, nbhd, survivors[0]);
    }

    // ---- clique component removal ----------------------------------------

    bool component_is_clique(const std::vector<VertexId>& comp) const {
        for (size_t i = 0; i < comp.size(); ++i)
            for (size_t j = i + 1; j < comp.size(); ++j)
                if (!g_.present(comp[i], comp[j])) return false;
        return true;
    }

    void drop_component(const std::vector<VertexId>& comp) {
        TraceStep step{RuleId::CliqueDrop, application_, -1, {}, {}, {}, {}, Weight::zero()};
        step.removed = comp;
        auto cluster = merged_expansion(g_, comp);
        if (!cluster.empty()) dropped_clusters_.push_back(std::move(cluster));
        for (VertexId u : comp) {
            g_.kill(u);
            if (tracking_) fresh_[u] = 1;  // dead entries never consulted
        }
        commit(std::move(step));
    }

    // A vertex whose cached statistics show no missing pair inside N[v] and
    // no edge leaving it sits in an isolated clique component equal to
    // N[v]; removing it cannot change anyone else's statistics. Requires
    // fresh statistics for all alive vertices.
    void drop_isolated_cliques() {
        for (VertexId t : alive_super_) {
            if (!g_.alive(t)) continue;
            const NeighborhoodStats& s = stats_[t];
            if (s.deficiency == Weight::zero() && s.cut == Weight::zero())
                drop_component(nbhd_of(t));
        }
    }

    KernelResult finish() {
        auto [kernel, remap] = g_.compact();
        KernelResult r{std::move(kernel), spent_, std::move(trace_),
                       std::vector<VertexFate>(static_cast<size_t>(g_.original_count())),
                       std::move(dropped_clusters_)};
        for (VertexId v = 0; v < g_.vertex_limit(); ++v) {
            if (!g_.alive(v)) continue;
            for (VertexId o : g_.expansion(v)) {
                if (g_.synthetic(v))
                    r.vertex_map[o] = {VertexFate::Replaced, -1};
                else
                    r.vertex_map[o] = {VertexFate::Representative, remap[v]};
            }
        }
        return r;
    }

    Instance g_;
    KernelizeOptions opts_;
    Weight spent_ = Weight::zero();
    ReductionTrace trace_;
    int application_ = 0;
    bool tracking_ = false;
    std::vector<std::vector<VertexId>> nbrs_;
    std::vector<WeightedDegree> deg_;
    std::vector<NeighborhoodStats> stats_;
    std::vector<uint8_t> fresh_;
    std::vector<VertexId> alive_super_;
    std::vector<std::vector<VertexId>> dropped_clusters_;
};

}  // namespace

KernelResult kernelize(const Instance& g, const KernelizeOptions& opts) {
    return Kernelizer(g, opts).run();
}

DecideResult decide(const Instance& g, Weight k) {
    if (k < Weight::zero() || k.infinite()) throw UsageError("budget k must be finite and >= 0");
    KernelResult r = kernelize(g);
    if (r.spent > k) return {DecideResult::No, Weight::zero(), std::move(r)};
    Weight residual = k - r.spent;
    int64_t count = r.kernel.alive_count();
    if (count == 0) return {DecideResult::Yes, residual, std::move(r)};
    // Size bound on a fully reduced instance: more than 2k vertices in
    // integer/unit mode means no solution within k. The real-mode factor is
    // 4, not the advertised 2.5: with the relaxed threshold an irreducible
    // pocket only guarantees cost (|N[v]|-1)/2 >= |N[v]|/4, and 4-vertex
    // irreducible instances with optimum just over n/2.5 exist, so 2.5
    // would reject yes-instances.
    bool too_big = g.mode() == Mode::Real
                       ? count * Weight::kScale > 4 * residual.micro()
                       : count * Weight::kScale > 2 * residual.micro();
    if (too_big) return {DecideResult::No, residual, std::move(r)};
    return {DecideResult::KernelOnly, residual, std::move(r)};
}

std::pair<Instance, Weight> step1_complete(const Instance& g, VertexId v) {
    Kernelizer k(g, {});
    Weight cost = k.run_step1(v);
    return {std::move(k.graph()), cost};
}

std::pair<Instance, Weight> step2_prune(const Instance& g, VertexId v) {
    Kernelizer k(g, {});
    Weight cost = k.run_step2(v);
    return {std::move(k.graph()), cost};
}

std::pair<Instance, Weight> step3_merge(const Instance& g, VertexId v) {
    Kernelizer k(g, {});
    Weight cost = k.run_step3(v, Mode::Integer);
    return {std::move(k.graph()), cost};
}

std::pair<Instance, Weight> step3_unweighted(const Instance& g, VertexId v) {
    Kernelizer k(g, {});
    Weight cost = k.run_step3(v, Mode::Unit);
    return {std::move(k.graph()), cost};
}

std::pair<Instance, Weight> step3_real(const Instance& g, VertexId v) {
    Kernelizer k(g, {});
    Weight cost = k.run_step3(v, Mode::Real);
    return {std::move(k.graph()), cost};
}

std::pair<Instance, Weight> drop_clique_components(const Instance& g) {
    Kernelizer k(g, {});
    Weight cost = k.run_drop_all();
    return {std::move(k.graph()), cost};
}

}  // namespace cek
