#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oraclekit/errors.hpp"
#include "oraclekit/formula.hpp"

namespace oraclekit {

using Vertex = std::uint32_t;
using Weight = std::uint64_t;
using VertexSet = std::vector<Vertex>; // sorted, duplicate-free

/// Simple undirected graph on vertices 0..size()-1 with positive vertex
/// weights (all 1 unless set).
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n) : n_(n), adj_(n * n, 0), neighbors_(n), weights_(n, 1) {}

    std::size_t size() const { return n_; }

    void add_edge(Vertex u, Vertex v) {
        check_vertex(u);
        check_vertex(v);
        if (u == v)
            throw InvalidInstance("self-loop on vertex " + std::to_string(u + 1));
        if (adj_[u * n_ + v])
            return;
        adj_[u * n_ + v] = adj_[v * n_ + u] = 1;
        insert_sorted(neighbors_[u], v);
        insert_sorted(neighbors_[v], u);
        ++edge_count_;
    }

    bool adjacent(Vertex u, Vertex v) const { return adj_[static_cast<std::size_t>(u) * n_ + v] != 0; }
    const std::vector<Vertex>& neighbors(Vertex v) const { return neighbors_[v]; }
    std::size_t degree(Vertex v) const { return neighbors_[v].size(); }
    std::size_t edge_count() const { return edge_count_; }

    std::vector<std::pair<Vertex, Vertex>> edges() const {
        std::vector<std::pair<Vertex, Vertex>> out;
        for (Vertex u = 0; u < n_; ++u)
            for (Vertex v : neighbors_[u])
                if (u < v)
                    out.emplace_back(u, v);
        return out;
    }

    Weight weight(Vertex v) const { return weights_[v]; }
    void set_weight(Vertex v, Weight w) {
        check_vertex(v);
        if (w < 1)
            throw InvalidInstance("vertex " + std::to_string(v + 1) + " has weight 0");
        weights_[v] = w;
    }
    bool has_unit_weights() const {
        return std::all_of(weights_.begin(), weights_.end(), [](Weight w) { return w == 1; });
    }
    Weight total_weight(std::span<const Vertex> vs) const {
        Weight s = 0;
        for (Vertex v : vs)
            s += weights_[v];
        return s;
    }

    /// Induced subgraph; vertex i of the result is keep[i].
    Graph induced(std::span<const Vertex> keep) const {
        Graph g(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) {
            g.weights_[i] = weights_[keep[i]];
            for (std::size_t j = i + 1; j < keep.size(); ++j)
                if (adjacent(keep[i], keep[j]))
                    g.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
        }
        return g;
    }

    bool is_clique(std::span<const Vertex> vs) const {
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j)
                if (vs[i] == vs[j] || !adjacent(vs[i], vs[j]))
                    return false;
        return true;
    }

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    void check_vertex(Vertex v) const {
        if (v >= n_)
            throw InvalidInstance("vertex " + std::to_string(v + 1) + " out of range 1.." + std::to_string(n_));
    }
    static void insert_sorted(std::vector<Vertex>& vs, Vertex v) { vs.insert(std::upper_bound(vs.begin(), vs.end(), v), v); }

    std::size_t n_ = 0;
    std::vector<char> adj_;
    std::vector<std::vector<Vertex>> neighbors_;
    std::vector<Weight> weights_;
    std::size_t edge_count_ = 0;
};

inline Graph complete_graph(std::size_t n) {
    Graph g(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            g.add_edge(u, v);
    return g;
}

/// Graph file contents: "p graph <n> <m> [weighted]", "w <v> <weight>",
/// "e <u> <v>", optional footer "param <h> <k>". Vertices are 1-based on disk.
struct GraphDocument {
    Graph graph;
    bool weighted = false;
    std::optional<std::pair<Weight, Weight>> params; // (h, k)

    friend bool operator==(const GraphDocument&, const GraphDocument&) = default;
};

inline GraphDocument parse_graph(std::istream& in) {
    GraphDocument doc;
    std::string raw;
    std::size_t line = 0;
    bool have_header = false;
    long long declared_edges = 0;
    std::size_t seen_edges = 0;
    std::vector<char> weight_set;

    auto vertex = [&](std::string_view tok) {
        long long v = detail::parse_int(tok, line);
        if (v < 1 || v > static_cast<long long>(doc.graph.size()))
            throw ParseError(line, "vertex " + std::string(tok) + " out of range 1.." + std::to_string(doc.graph.size()));
        return static_cast<Vertex>(v - 1);
    };

    while (std::getline(in, raw)) {
        ++line;
        auto toks = detail::split_tokens(raw);
        if (detail::is_comment_or_blank(toks))
            continue;
        if (!have_header) {
            if (toks.size() < 4 || toks.size() > 5 || toks[0] != "p" || toks[1] != "graph" ||
                (toks.size() == 5 && toks[4] != "weighted"))
                throw ParseError(line, "expected header 'p graph <n> <m> [weighted]'");
            long long n = detail::parse_nonnegative(toks[2], line);
            declared_edges = detail::parse_nonnegative(toks[3], line);
            if (n > 100000)
                throw ParseError(line, "vertex count too large");
            doc.graph = Graph(static_cast<std::size_t>(n));
            doc.weighted = toks.size() == 5;
            weight_set.assign(static_cast<std::size_t>(n), 0);
            have_header = true;
            continue;
        }
        if (doc.params)
            throw ParseError(line, "content after the 'param' footer");
        if (toks[0] == "w") {
            if (toks.size() != 3)
                throw ParseError(line, "expected 'w <v> <weight>'");
            if (!doc.weighted)
                throw ParseError(line, "weight line in an unweighted graph");
            Vertex v = vertex(toks[1]);
            long long w = detail::parse_int(toks[2], line);
            if (w < 1)
                throw ParseError(line, "weights must be positive");
            if (weight_set[v])
                throw ParseError(line, "duplicate weight for vertex " + std::to_string(v + 1));
            weight_set[v] = 1;
            doc.graph.set_weight(v, static_cast<Weight>(w));
        } else if (toks[0] == "e") {
            if (toks.size() != 3)
                throw ParseError(line, "expected 'e <u> <v>'");
            Vertex u = vertex(toks[1]);
            Vertex v = vertex(toks[2]);
            if (u == v)
                throw ParseError(line, "self-loop on vertex " + std::to_string(u + 1));
            if (doc.graph.adjacent(u, v))
                throw ParseError(line, "duplicate edge " + std::to_string(u + 1) + " " + std::to_string(v + 1));
            doc.graph.add_edge(u, v);
            ++seen_edges;
        } else if (toks[0] == "param") {
            if (toks.size() != 3)
                throw ParseError(line, "expected 'param <h> <k>'");
            long long h = detail::parse_nonnegative(toks[1], line);
            long long k = detail::parse_int(toks[2], line);
            if (k < 1)
                throw ParseError(line, "k must be at least 1");
            doc.params = {static_cast<Weight>(h), static_cast<Weight>(k)};
        } else {
            throw ParseError(line, "unknown line type '" + std::string(toks[0]) + "'");
        }
    }
    if (!have_header)
        throw ParseError(line == 0 ? 1 : line, "missing header 'p graph <n> <m>'");
    if (static_cast<long long>(seen_edges) != declared_edges)
        throw ParseError(line, "header declares " + std::to_string(declared_edges) + " edges, found " +
                                   std::to_string(seen_edges));
    return doc;
}

inline GraphDocument parse_graph(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_graph(in);
}

inline std::string serialize_graph(const GraphDocument& doc) {
    const Graph& g = doc.graph;
    std::string out = "p graph " + std::to_string(g.size()) + " " + std::to_string(g.edge_count()) +
                      (doc.weighted ? " weighted" : "") + "\n";
    if (doc.weighted)
        for (Vertex v = 0; v < g.size(); ++v)
            if (g.weight(v) != 1)
                out += "w " + std::to_string(v + 1) + " " + std::to_string(g.weight(v)) + "\n";
    for (auto [u, v] : g.edges())
        out += "e " + std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
    if (doc.params)
        out += "param " + std::to_string(doc.params->first) + " " + std::to_string(doc.params->second) + "\n";
    return out;
}

} // namespace oraclekit
