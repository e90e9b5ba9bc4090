#include "cek/instance.hpp"

#include <algorithm>

#include "cek/errors.hpp"

namespace cek {

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::Integer: return "int";
        case Mode::Unit: return "unit";
        case Mode::Real: return "real";
    }
    return "?";
}

Mode parse_mode(std::string_view name) {
    if (name == "int" || name == "integer") return Mode::Integer;
    if (name == "unit" || name == "unweighted") return Mode::Unit;
    if (name == "real") return Mode::Real;
    throw UsageError("unknown mode '" + std::string(name) + "'");
}

void Clustering::canonicalize() {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
}

Instance::Instance(int n, Mode mode)
    : mode_(mode),
      original_n_(n),
      alive_count_(n),
      alive_(n, 1),
      present_(static_cast<size_t>(n) * (n - 1) / 2, 0),
      weight_(static_cast<size_t>(n) * (n - 1) / 2, Weight::one()),
      expansion_(n),
      synthetic_(n, 0),
      replace_group_(n, -1) {
    if (n < 0) throw UsageError("negative vertex count");
    for (int v = 0; v < n; ++v) expansion_[v] = {v};
}

VertexId Instance::check_id(VertexId v) const {
    if (v < 0 || v >= vertex_limit()) throw UsageError("vertex id out of range");
    return v;
}

size_t Instance::pair_index(VertexId u, VertexId v) const {
    check_id(u);
    check_id(v);
    if (u == v) throw UsageError("self pair");
    if (u > v) std::swap(u, v);
    return static_cast<size_t>(v) * (v - 1) / 2 + u;
}

void Instance::toggle(VertexId u, VertexId v) {
    size_t i = pair_index(u, v);
    if (weight_[i].infinite()) throw ForbiddenEditError("edit of a +inf pair");
    present_[i] = !present_[i];
}

std::vector<VertexId> Instance::vertices() const {
    std::vector<VertexId> ids;
    ids.reserve(alive_count_);
    for (VertexId v = 0; v < vertex_limit(); ++v)
        if (alive_[v]) ids.push_back(v);
    return ids;
}

VertexId Instance::add_vertex(bool synthetic, std::vector<VertexId> expansion) {
    VertexId id = vertex_limit();
    alive_.push_back(1);
    ++alive_count_;
    present_.insert(present_.end(), id, 0);
    weight_.insert(weight_.end(), id, Weight::one());
    expansion_.push_back(std::move(expansion));
    synthetic_.push_back(synthetic);
    replace_group_.push_back(-1);
    return id;
}

void Instance::kill(VertexId v) {
    check_id(v);
    if (alive_[v]) {
        alive_[v] = 0;
        --alive_count_;
    }
}

std::pair<Instance, std::vector<VertexId>> Instance::compact() const {
    std::vector<VertexId> remap(vertex_limit(), -1);
    int n = 0;
    for (VertexId v = 0; v < vertex_limit(); ++v)
        if (alive_[v]) remap[v] = n++;
    Instance out(n, mode_);
    out.original_n_ = original_n_;
    for (VertexId v = 0; v < vertex_limit(); ++v) {
        if (!alive_[v]) continue;
        VertexId nv = remap[v];
        out.expansion_[nv] = expansion_[v];
        out.synthetic_[nv] = synthetic_[v];
        out.replace_group_[nv] = replace_group_[v];
        for (VertexId u = 0; u < v; ++u) {
            if (!alive_[u]) continue;
            size_t i = pair_index(u, v);
            out.set_pair(remap[u], nv, present_[i] != 0, weight_[i]);
        }
    }
    return {std::move(out), std::move(remap)};
}

bool operator==(const Instance& a, const Instance& b) {
    return a.mode_ == b.mode_ && a.alive_ == b.alive_ && a.present_ == b.present_ &&
           a.weight_ == b.weight_ && a.expansion_ == b.expansion_ &&
           a.synthetic_ == b.synthetic_;
}

std::vector<VertexId> closed_neighborhood(const Instance& g, VertexId v) {
    if (!g.alive(v)) throw UsageError("closed_neighborhood of a dead vertex");
    std::vector<VertexId> out;
    for (VertexId u = 0; u < g.vertex_limit(); ++u) {
        if (u == v)
            out.push_back(u);
        else if (g.alive(u) && g.present(u, v))
            out.push_back(u);
    }
    return out;
}

Weight cut_weight(const Instance& g, std::span<const VertexId> x) {
    std::vector<uint8_t> in(g.vertex_limit(), 0);
    for (VertexId v : x) {
        if (!g.alive(v)) throw UsageError("cut over a dead vertex");
        in[v] = 1;
    }
    Weight total = Weight::zero();
    for (VertexId v : x)
        for (VertexId u = 0; u < g.vertex_limit(); ++u)
            if (!in[u] && g.alive(u) && g.present(u, v)) total += g.weight(u, v);
    return total;
}

Instance apply_edits(const Instance& g, const EditSet& s) {
    Instance out = g;
    for (const VertexPair& p : s.pairs) out.toggle(p.a, p.b);
    return out;
}

std::vector<std::vector<VertexId>> connected_components(const Instance& g) {
    std::vector<std::vector<VertexId>> comps;
    std::vector<uint8_t> seen(g.vertex_limit(), 0);
    for (VertexId s = 0; s < g.vertex_limit(); ++s) {
        if (!g.alive(s) || seen[s]) continue;
        std::vector<VertexId> comp{s};
        seen[s] = 1;
        for (size_t head = 0; head < comp.size(); ++head) {
            VertexId v = comp[head];
            for (VertexId u = 0; u < g.vertex_limit(); ++u) {
                if (u == v || !g.alive(u) || seen[u] || !g.present(u, v)) continue;
                seen[u] = 1;
                comp.push_back(u);
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

bool is_cluster_graph(const Instance& g) {
    for (const auto& comp : connected_components(g))
        for (size_t i = 0; i < comp.size(); ++i)
            for (size_t j = i + 1; j < comp.size(); ++j)
                if (!g.present(comp[i], comp[j])) return false;
    return true;
}

EditSet clustering_to_edits(const Instance& g, const Clustering& c) {
    std::vector<int32_t> block_of(g.vertex_limit(), -1);
    int covered = 0;
    for (size_t b = 0; b < c.blocks.size(); ++b) {
        for (VertexId v : c.blocks[b]) {
            if (!g.alive(v) || block_of[v] != -1)
                throw UsageError("clustering does not partition the alive vertices");
            block_of[v] = static_cast<int32_t>(b);
            ++covered;
        }
    }
    if (covered != g.alive_count())
        throw UsageError("clustering does not cover all alive vertices");

    EditSet s;
    for (VertexId v = 0; v < g.vertex_limit(); ++v) {
        if (!g.alive(v)) continue;
        for (VertexId u = 0; u < v; ++u) {
            if (!g.alive(u)) continue;
            bool same = block_of[u] == block_of[v];
            bool pres = g.present(u, v);
            if (same == pres) continue;
            s.pairs.emplace_back(u, v);
            s.weight += g.weight(u, v);
        }
    }
    return s;
}

}  // namespace cek
