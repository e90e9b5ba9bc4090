#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cek/weight.hpp"

namespace cek {

using VertexId = int32_t;

enum class Mode { Integer, Unit, Real };

std::string mode_name(Mode m);
Mode parse_mode(std::string_view name);

// Unordered pair; normalized so a < b.
struct VertexPair {
    VertexId a;
    VertexId b;
    VertexPair(VertexId u, VertexId v) : a(u < v ? u : v), b(u < v ? v : u) {}
    friend bool operator==(const VertexPair&, const VertexPair&) = default;
    friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

struct PairState {
    bool present;
    Weight weight;  // deletion cost if present, insertion cost if absent
};

struct EditSet {
    std::vector<VertexPair> pairs;
    Weight weight = Weight::zero();
};

// Partition of the alive vertices into disjoint nonempty blocks.
struct Clustering {
    std::vector<std::vector<VertexId>> blocks;

    // Sorts members and orders blocks by first member.
    void canonicalize();
    friend bool operator==(const Clustering&, const Clustering&) = default;
};

// Weighted cluster-editing instance over a set of vertices. Every unordered
// pair of alive vertices carries a presence bit and a weight. The pair table
// is a dense lower-triangular array keyed by (min,max) id, so pair access is
// O(1) and appending a vertex extends the table in place. Vertices removed
// by reductions are tombstoned rather than erased; ids are stable for the
// lifetime of the instance and traces refer to them.
class Instance {
public:
    Instance(int n, Mode mode);

    Mode mode() const { return mode_; }

    // Extent of the id space, dead ids included.
    int vertex_limit() const { return static_cast<int>(alive_.size()); }
    int alive_count() const { return alive_count_; }
    bool alive(VertexId v) const { return alive_[check_id(v)]; }
    std::vector<VertexId> vertices() const;  // alive ids, ascending

    int original_count() const { return original_n_; }

    bool present(VertexId u, VertexId v) const { return present_[pair_index(u, v)]; }
    Weight weight(VertexId u, VertexId v) const { return weight_[pair_index(u, v)]; }
    PairState pair(VertexId u, VertexId v) const {
        size_t i = pair_index(u, v);
        return {present_[i] != 0, weight_[i]};
    }

    void set_pair(VertexId u, VertexId v, bool present, Weight w) {
        size_t i = pair_index(u, v);
        present_[i] = present;
        weight_[i] = w;
    }
    void set_present(VertexId u, VertexId v, bool present) { present_[pair_index(u, v)] = present; }
    void set_weight(VertexId u, VertexId v, Weight w) { weight_[pair_index(u, v)] = w; }

    // Flips the presence bit, keeping the weight. Throws ForbiddenEditError
    // on a +inf pair.
    void toggle(VertexId u, VertexId v);

    // Appends a fresh vertex above all existing ids and returns its id.
    // Pairs to all other vertices start absent with weight 1.
    VertexId add_vertex(bool synthetic, std::vector<VertexId> expansion);

    void kill(VertexId v);

    // Original vertex ids this vertex stands for. A never-merged input
    // vertex expands to itself; representatives carry the union of what
    // they absorbed; synthetic clique-replacement vertices other than the
    // group anchor carry nothing.
    const std::vector<VertexId>& expansion(VertexId v) const { return expansion_[check_id(v)]; }
    void set_expansion(VertexId v, std::vector<VertexId> e) { expansion_[check_id(v)] = std::move(e); }

    bool synthetic(VertexId v) const { return synthetic_[check_id(v)]; }

    // Vertices created together by one clique-replacement step share a
    // group id; -1 for everything else.
    int32_t replace_group(VertexId v) const { return replace_group_[check_id(v)]; }
    void set_replace_group(VertexId v, int32_t g) { replace_group_[check_id(v)] = g; }

    // Drops dead ids and renumbers the rest, preserving order. Returns the
    // compacted instance and old-id -> new-id (-1 for dead).
    std::pair<Instance, std::vector<VertexId>> compact() const;

    friend bool operator==(const Instance&, const Instance&);

private:
    size_t pair_index(VertexId u, VertexId v) const;
    VertexId check_id(VertexId v) const;

    Mode mode_;
    int original_n_;
    int alive_count_;
    std::vector<uint8_t> alive_;
    std::vector<uint8_t> present_;   // triangular
    std::vector<Weight> weight_;     // triangular
    std::vector<std::vector<VertexId>> expansion_;
    std::vector<uint8_t> synthetic_;
    std::vector<int32_t> replace_group_;
};

// {v} plus every alive vertex adjacent to v, ascending.
std::vector<VertexId> closed_neighborhood(const Instance& g, VertexId v);

// Total weight of present pairs with exactly one endpoint in X.
Weight cut_weight(const Instance& g, std::span<const VertexId> x);

// Copy of g with every pair of s toggled. Throws on a +inf member.
Instance apply_edits(const Instance& g, const EditSet& s);

bool is_cluster_graph(const Instance& g);

std::vector<std::vector<VertexId>> connected_components(const Instance& g);

// Edits that realize clustering c: present pairs crossing blocks plus
// absent pairs within blocks. A required +inf insertion or deletion makes
// the total weight +inf; the pair is still listed.
EditSet clustering_to_edits(const Instance& g, const Clustering& c);

}  // namespace cek
