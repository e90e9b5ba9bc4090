#include "cek/solver.hpp"

#include <algorithm>
#include <map>

#include "cek/errors.hpp"

namespace cek {

namespace {

// Finite-plus-infinity accumulator; subtraction must stay exact, which the
// saturating Weight cannot do.
struct Acc {
    int64_t micro = 0;
    int32_t infs = 0;
    void add(Weight w, int sign) {
        if (w.infinite())
            infs += sign;
        else
            micro += sign * w.micro();
    }
};

std::optional<Clustering> forced_clustering(const Instance& g);

class BruteForce {
public:
    BruteForce(const Instance& g, bool enumerate_all)
        : g_(g), ids_(g.vertices()), all_(enumerate_all) {}

    OptResult run() {
        int n = static_cast<int>(ids_.size());
        if (n > kBruteForceLimit)
            throw GuardError("brute force refuses " + std::to_string(n) + " vertices (limit " +
                             std::to_string(kBruteForceLimit) + ")");
        assign_.assign(n, -1);
        if (n == 0) {
            Clustering empty;
            OptResult r{Weight::zero(), empty, std::nullopt, 1};
            if (all_) r.all_optima = std::vector<Clustering>{empty};
            return r;
        }
        seed_bound();
        dfs(0, Weight::zero());
        OptResult r{best_, std::nullopt, std::nullopt, nodes_};
        if (best_.finite()) {
            // without enumerate_all, a leaf matching the seeded bound is
            // pruned, so fall back to the seeding witness
            r.witness = optima_.empty() ? *fallback_ : optima_.front();
            if (all_) r.all_optima = std::move(optima_);
        } else if (all_) {
            r.all_optima = std::vector<Clustering>{};
        }
        return r;
    }

private:
    void record(Weight cost) {
        if (cost < best_) {
            best_ = cost;
            optima_.clear();
        } else if (!all_ || cost > best_) {
            return;
        }
        Clustering c;
        c.blocks.resize(block_count_);
        for (size_t i = 0; i < assign_.size(); ++i) c.blocks[assign_[i]].push_back(ids_[i]);
        c.canonicalize();
        optima_.push_back(std::move(c));
    }

    void dfs(int i, Weight cur) {
        ++nodes_;
        if (i == static_cast<int>(ids_.size())) {
            record(cur);
            return;
        }
        // One pass over the assigned prefix: cost of putting i in a fresh
        // block (delete every present pair to the prefix), and per existing
        // block the correction for joining it instead.
        Acc fresh;
        std::vector<Acc> adj(block_count_);
        for (int j = 0; j < i; ++j) {
            PairState p = g_.pair(ids_[j], ids_[i]);
            if (p.present) {
                fresh.add(p.weight, +1);
                adj[assign_[j]].add(p.weight, -1);
            } else {
                adj[assign_[j]].add(p.weight, +1);
            }
        }

        for (int b = 0; b <= block_count_; ++b) {
            bool is_new = b == block_count_;
            int32_t infs = fresh.infs + (is_new ? 0 : adj[b].infs);
            if (infs > 0) continue;  // needs a +inf edit, infeasible
            Weight inc = Weight::from_micro(fresh.micro + (is_new ? 0 : adj[b].micro));
            Weight next = cur + inc;
            if (all_ ? next > best_ : next >= best_) continue;
            assign_[i] = b;
            if (is_new) ++block_count_;
            dfs(i + 1, next);
            if (is_new) --block_count_;
            assign_[i] = -1;
        }
    }

    // Cheap feasible clusterings to start the bound from; pruning against
    // them keeps the enumeration shallow on both sparse and dense inputs.
    void seed_bound() {
        best_ = Weight::infinity();
        auto consider = [&](Clustering c) {
            Weight w = clustering_to_edits(g_, c).weight;
            if (w < best_) {
                best_ = w;
                fallback_ = std::move(c);
            }
        };
        Clustering singles;
        for (VertexId v : ids_) singles.blocks.push_back({v});
        consider(std::move(singles));
        Clustering comps;
        comps.blocks = connected_components(g_);
        consider(std::move(comps));
        if (best_.infinite()) {
            // +inf edges present: group them as any feasible solution must
            if (auto forced = forced_clustering(g_)) consider(std::move(*forced));
        }
    }

    const Instance& g_;
    std::vector<VertexId> ids_;
    bool all_;
    std::vector<int8_t> assign_;
    int block_count_ = 0;
    Weight best_;
    std::optional<Clustering> fallback_;
    std::vector<Clustering> optima_;
    uint64_t nodes_ = 0;
};

// Union of vertices chained together by +inf edges; any feasible solution
// keeps each such set in one cluster.
struct ForcedBlocks {
    std::vector<VertexId> parent;
    VertexId find(VertexId v) { return parent[v] == v ? v : parent[v] = find(parent[v]); }
    void unite(VertexId a, VertexId b) { parent[find(a)] = find(b); }
};

std::optional<Clustering> forced_clustering(const Instance& g) {
    ForcedBlocks uf;
    uf.parent.resize(g.vertex_limit());
    for (VertexId v = 0; v < g.vertex_limit(); ++v) uf.parent[v] = v;
    auto ids = g.vertices();
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = i + 1; j < ids.size(); ++j) {
            PairState p = g.pair(ids[i], ids[j]);
            if (p.present && p.weight.infinite()) uf.unite(ids[i], ids[j]);
        }
    // an absent +inf pair inside one forced set cannot be inserted
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = i + 1; j < ids.size(); ++j) {
            PairState p = g.pair(ids[i], ids[j]);
            if (!p.present && p.weight.infinite() && uf.find(ids[i]) == uf.find(ids[j]))
                return std::nullopt;
        }
    std::map<VertexId, std::vector<VertexId>> groups;
    for (VertexId v : ids) groups[uf.find(v)].push_back(v);
    Clustering c;
    for (auto& [root, members] : groups) c.blocks.push_back(std::move(members));
    c.canonicalize();
    return c;
}

class Branching {
public:
    Branching(const Instance& g, std::optional<Weight> ub) : g_(g), ub_(ub) {}

    OptResult run() {
        auto start = forced_clustering(g_);
        if (!start) return {Weight::infinity(), std::nullopt, std::nullopt, 1};
        best_ = clustering_to_edits(g_, *start).weight;
        witness_ = *start;
        if (ub_ && *ub_ < best_) best_ = *ub_;
        dfs(Weight::zero());
        return {best_, witness_, std::nullopt, nodes_};
    }

private:
    struct Triple {
        VertexId u, v, w;  // edges uv, vw; anti-edge uw
        Weight total;
    };

    std::optional<Triple> heaviest_conflict() const {
        std::optional<Triple> pick;
        auto ids = g_.vertices();
        for (VertexId v : ids) {
            for (VertexId u : ids) {
                if (u == v || !g_.present(u, v)) continue;
                for (VertexId w : ids) {
                    if (w <= u || w == v || !g_.present(v, w)) continue;
                    if (g_.present(u, w)) continue;
                    Weight total = g_.weight(u, v) + g_.weight(v, w) + g_.weight(u, w);
                    if (!pick || total > pick->total) pick = Triple{u, v, w, total};
                }
            }
        }
        return pick;
    }

    void settle(VertexId a, VertexId b, bool present, Weight acc) {
        PairState saved = g_.pair(a, b);
        Weight cost = acc + saved.weight;
        if (saved.weight.finite() && cost < best_) {
            g_.set_pair(a, b, present, Weight::infinity());
            dfs(cost);
            g_.set_pair(a, b, saved.present, saved.weight);
        }
    }

    void dfs(Weight acc) {
        ++nodes_;
        auto triple = heaviest_conflict();
        if (!triple) {
            if (acc < best_) {
                best_ = acc;
                Clustering c;
                c.blocks = connected_components(g_);
                c.canonicalize();
                witness_ = std::move(c);
            }
            return;
        }
        settle(triple->u, triple->v, false, acc);  // delete uv
        settle(triple->v, triple->w, false, acc);  // delete vw
        settle(triple->u, triple->w, true, acc);   // insert uw
    }

    Instance g_;
    std::optional<Weight> ub_;
    Weight best_ = Weight::infinity();
    std::optional<Clustering> witness_;
    uint64_t nodes_ = 0;
};

// Moves every clique-replacement group into a single cluster of the
// witness, choosing the cheapest destination. A split group can only come
// from a tied or wasteful witness; gathering it never costs more, which we
// assert, and makes provenance expansion well defined.
Clustering gather_replace_groups(const Instance& kernel, Clustering c) {
    std::map<int32_t, std::vector<VertexId>> groups;
    for (VertexId v : kernel.vertices())
        if (kernel.replace_group(v) >= 0) groups[kernel.replace_group(v)].push_back(v);

    for (auto& [gid, members] : groups) {
        auto find_blocks = [&](const Clustering& cl) {
            std::vector<int> blocks;
            for (size_t b = 0; b < cl.blocks.size(); ++b)
                for (VertexId m : members)
                    if (std::count(cl.blocks[b].begin(), cl.blocks[b].end(), m)) {
                        blocks.push_back(static_cast<int>(b));
                        break;
                    }
            return blocks;
        };
        auto home_blocks = find_blocks(c);
        if (home_blocks.size() <= 1) continue;

        auto is_member = [&](VertexId v) {
            return std::count(members.begin(), members.end(), v) > 0;
        };
        Weight cur_weight = clustering_to_edits(kernel, c).weight;
        std::optional<Clustering> pick;
        Weight pick_weight = Weight::infinity();
        for (size_t cand = 0; cand <= home_blocks.size(); ++cand) {
            int dest = cand < home_blocks.size() ? home_blocks[cand] : -1;
            Clustering moved;
            for (size_t b = 0; b < c.blocks.size(); ++b) {
                std::vector<VertexId> block;
                for (VertexId v : c.blocks[b])
                    if (!is_member(v)) block.push_back(v);
                if (static_cast<int>(b) == dest)
                    block.insert(block.end(), members.begin(), members.end());
                if (!block.empty()) moved.blocks.push_back(std::move(block));
            }
            if (dest < 0) moved.blocks.push_back(members);  // own cluster
            moved.canonicalize();
            Weight w = clustering_to_edits(kernel, moved).weight;
            if (w < pick_weight) {
                pick_weight = w;
                pick = std::move(moved);
            }
        }
        if (!pick || pick_weight > cur_weight)
            throw ContractViolation("gathering a replacement group increased the cost");
        c = std::move(*pick);
    }
    return c;
}

}  // namespace

OptResult brute_force_opt(const Instance& g, bool enumerate_all) {
    return BruteForce(g, enumerate_all).run();
}

OptResult branch_opt(const Instance& g, std::optional<Weight> upper_bound) {
    return Branching(g, upper_bound).run();
}

EditSet lift_solution(const Instance& original, const KernelResult& r,
                      const Clustering& kernel_witness) {
    const Instance& kernel = r.kernel;
    for (const auto& block : kernel_witness.blocks)
        for (VertexId v : block)
            if (v < 0 || v >= kernel.vertex_limit() || !kernel.alive(v))
                throw ContractViolation("kernel witness references a dead vertex");

    Clustering gathered = gather_replace_groups(kernel, kernel_witness);

    Clustering lifted;
    for (const auto& block : gathered.blocks) {
        std::vector<VertexId> cluster;
        for (VertexId v : block) {
            const auto& e = kernel.expansion(v);
            cluster.insert(cluster.end(), e.begin(), e.end());
        }
        if (!cluster.empty()) lifted.blocks.push_back(std::move(cluster));
    }
    for (const auto& dropped : r.dropped_clusters) lifted.blocks.push_back(dropped);
    lifted.canonicalize();
    return clustering_to_edits(original, lifted);
}

}  // namespace cek
