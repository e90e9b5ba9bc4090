#include "cek/stats.hpp"

#include "cek/errors.hpp"

namespace cek {

NeighborhoodStats stats(const Instance& g, VertexId v) {
    if (!g.alive(v)) throw UsageError("stats of a dead vertex");
    auto nbhd = closed_neighborhood(g, v);
    std::vector<uint8_t> in(g.vertex_limit(), 0);
    for (VertexId u : nbhd) in[u] = 1;

    NeighborhoodStats s;
    s.v = v;
    s.size = static_cast<int>(nbhd.size());
    for (size_t i = 0; i < nbhd.size(); ++i)
        for (size_t j = i + 1; j < nbhd.size(); ++j)
            if (!g.present(nbhd[i], nbhd[j])) s.deficiency += g.weight(nbhd[i], nbhd[j]);
    for (VertexId u : nbhd)
        for (VertexId w = 0; w < g.vertex_limit(); ++w)
            if (!in[w] && g.alive(w) && g.present(u, w)) s.cut += g.weight(u, w);
    s.stable_cost = 2 * s.deficiency + s.cut;
    return s;
}

bool reducible_by(const NeighborhoodStats& s, Mode mode) {
    if (mode == Mode::Real) return s.stable_cost <= Weight::from_units(s.size - 1);
    return s.stable_cost < Weight::from_units(s.size);
}

bool is_reducible(const Instance& g, VertexId v) { return reducible_by(stats(g, v), g.mode()); }

std::vector<WeightedDegree> weighted_degrees(const Instance& g) {
    std::vector<WeightedDegree> deg(g.vertex_limit());
    const int limit = g.vertex_limit();
#pragma omp parallel for schedule(dynamic, 32)
    for (VertexId v = 0; v < limit; ++v) {
        if (!g.alive(v)) continue;
        WeightedDegree d;
        for (VertexId u = 0; u < limit; ++u) {
            if (u == v || !g.alive(u) || !g.present(u, v)) continue;
            Weight w = g.weight(u, v);
            if (w.infinite())
                ++d.inf_edges;
            else
                d.finite_micro += w.micro();
        }
        deg[v] = d;
    }
    return deg;
}

NeighborhoodStats stats_with_degrees(const Instance& g, VertexId v,
                                     std::span<const WeightedDegree> deg) {
    return stats_with_degrees(g, v, deg, g.vertices());
}

NeighborhoodStats stats_with_degrees(const Instance& g, VertexId v,
                                     std::span<const WeightedDegree> deg,
                                     std::span<const VertexId> candidates) {
    std::vector<VertexId> nbhd;
    for (VertexId u : candidates)
        if (u == v || (g.alive(u) && g.present(u, v))) nbhd.push_back(u);

    NeighborhoodStats s;
    s.v = v;
    s.size = static_cast<int>(nbhd.size());

    int64_t inside_finite = 0;
    int64_t inside_inf = 0;
    for (size_t i = 0; i < nbhd.size(); ++i) {
        for (size_t j = i + 1; j < nbhd.size(); ++j) {
            PairState p = g.pair(nbhd[i], nbhd[j]);
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
        sum_finite += deg[u].finite_micro;
        sum_inf += deg[u].inf_edges;
    }
    // Pairs inside N[v] are counted in both endpoints' degrees, boundary
    // edges once.
    int64_t boundary_inf = sum_inf - 2 * inside_inf;
    s.cut = boundary_inf > 0 ? Weight::infinity()
                             : Weight::from_micro(sum_finite - 2 * inside_finite);
    s.stable_cost = 2 * s.deficiency + s.cut;
    return s;
}

std::vector<NeighborhoodStats> scan_stats(const Instance& g) {
    auto deg = weighted_degrees(g);
    auto alive = g.vertices();
    std::vector<NeighborhoodStats> out(g.vertex_limit());
    const int limit = g.vertex_limit();
#pragma omp parallel for schedule(dynamic, 16)
    for (VertexId v = 0; v < limit; ++v) {
        if (!g.alive(v)) continue;
        out[v] = stats_with_degrees(g, v, deg, alive);
    }
    return out;
}

std::vector<NeighborhoodStats> scan_stats_serial(const Instance& g) {
    std::vector<NeighborhoodStats> out(g.vertex_limit());
    for (VertexId v = 0; v < g.vertex_limit(); ++v) {
        if (!g.alive(v)) continue;
        out[v] = stats(g, v);
    }
    return out;
}

}  // namespace cek
