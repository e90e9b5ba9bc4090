#include "cek/io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "cek/errors.hpp"

namespace cek {

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

VertexId parse_id(const std::string& t, int n, int line) {
    size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(t, &pos);
    } catch (const std::exception&) {
        throw ParseError(line, "bad vertex id '" + t + "'");
    }
    if (pos != t.size() || v < 1 || v > n)
        throw ParseError(line, "vertex id '" + t + "' out of range 1.." + std::to_string(n));
    return static_cast<VertexId>(v - 1);
}

Weight parse_weight_checked(const std::string& t, Mode mode, int line) {
    Weight w;
    try {
        w = Weight::parse(t);
    } catch (const UsageError& e) {
        throw ParseError(line, e.what());
    }
    if (w.finite() && w < Weight::one())
        throw ParseError(line, "weights below 1 are not supported");
    if (mode == Mode::Integer && w.finite() && !w.integral())
        throw ParseError(line, "fractional weight in integer mode");
    return w;
}

}  // namespace

Instance parse_instance(std::istream& in, Mode mode) {
    std::string line;
    int lineno = 0;
    bool weighted = false;
    int n = -1;
    long m = 0;
    long edges_seen = 0;
    std::vector<uint8_t> touched;  // triangular: 0 untouched, 1 edge, 2 anti override
    Instance g(0, mode);

    auto tri = [&](VertexId u, VertexId v) {
        if (u > v) std::swap(u, v);
        return static_cast<size_t>(v) * (v - 1) / 2 + u;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == 'c') continue;
        auto tok = tokens(line);
        if (tok.empty()) continue;

        if (tok[0] == "p") {
            if (n >= 0) throw ParseError(lineno, "duplicate header");
            if (tok.size() != 4 || (tok[1] != "cew" && tok[1] != "cep"))
                throw ParseError(lineno, "expected 'p cew <n> <m>' or 'p cep <n> <m>'");
            weighted = tok[1] == "cew";
            if (mode == Mode::Unit && weighted)
                throw ParseError(lineno, "unit mode requires a cep header");
            try {
                n = std::stoi(tok[2]);
                m = std::stol(tok[3]);
            } catch (const std::exception&) {
                throw ParseError(lineno, "bad header counts");
            }
            if (n < 0 || m < 0) throw ParseError(lineno, "bad header counts");
            g = Instance(n, mode);
            touched.assign(static_cast<size_t>(n) * (n - 1) / 2, 0);
            continue;
        }

        if (n < 0) throw ParseError(lineno, "edge line before header");

        if (tok[0] == "e") {
            size_t want = weighted ? 4 : 3;
            if (tok.size() != want)
                throw ParseError(lineno, weighted ? "expected 'e <u> <v> <w>'"
                                                  : "expected 'e <u> <v>'");
            VertexId u = parse_id(tok[1], n, lineno);
            VertexId v = parse_id(tok[2], n, lineno);
            if (u == v) throw ParseError(lineno, "self loop");
            if (touched[tri(u, v)]) throw ParseError(lineno, "duplicate pair");
            touched[tri(u, v)] = 1;
            Weight w = weighted ? parse_weight_checked(tok[3], mode, lineno) : Weight::one();
            g.set_pair(u, v, true, w);
            ++edges_seen;
            continue;
        }

        if (tok[0] == "a") {
            if (!weighted) throw ParseError(lineno, "anti-edge weights need a cew header");
            if (tok.size() != 4) throw ParseError(lineno, "expected 'a <u> <v> <w>'");
            VertexId u = parse_id(tok[1], n, lineno);
            VertexId v = parse_id(tok[2], n, lineno);
            if (u == v) throw ParseError(lineno, "self loop");
            if (touched[tri(u, v)] == 1)
                throw ParseError(lineno, "anti-edge override for an edge");
            if (touched[tri(u, v)] == 2) throw ParseError(lineno, "duplicate pair");
            touched[tri(u, v)] = 2;
            g.set_pair(u, v, false, parse_weight_checked(tok[3], mode, lineno));
            continue;
        }

        throw ParseError(lineno, "unknown line type '" + tok[0] + "'");
    }

    if (n < 0) throw ParseError(lineno, "missing header");
    if (edges_seen != m)
        throw ParseError(lineno, "header claims " + std::to_string(m) + " edges, found " +
                                     std::to_string(edges_seen));
    return g;
}

Instance parse_instance(const std::string& text, Mode mode) {
    std::istringstream ss(text);
    return parse_instance(ss, mode);
}

Instance load_instance(const std::string& path, Mode mode) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    return parse_instance(in, mode);
}

std::string serialize(const Instance& g) {
    if (g.alive_count() != g.vertex_limit())
        throw ContractViolation("serialize requires a compacted instance");
    int n = g.vertex_limit();
    bool weighted = g.mode() != Mode::Unit;

    std::ostringstream edges, antis;
    long m = 0;
    for (VertexId v = 0; v < n; ++v) {
        for (VertexId u = 0; u < v; ++u) {
            PairState p = g.pair(u, v);
            if (p.present) {
                edges << "e " << u + 1 << " " << v + 1;
                if (weighted) edges << " " << p.weight.str();
                edges << "\n";
                ++m;
            } else if (weighted && p.weight != Weight::one()) {
                antis << "a " << u + 1 << " " << v + 1 << " " << p.weight.str() << "\n";
            }
        }
    }

    std::ostringstream out;
    out << "p " << (weighted ? "cew" : "cep") << " " << n << " " << m << "\n";
    out << edges.str() << antis.str();
    return out.str();
}

void save_instance(const Instance& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << serialize(g);
}

}  // namespace cek
