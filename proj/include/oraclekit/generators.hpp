#pragma once

// Seeded instance generators for the test corpora and the CLI `gen` command.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "oraclekit/cliquedel.hpp"
#include "oraclekit/discovery.hpp"
#include "oraclekit/formula.hpp"
#include "oraclekit/graph.hpp"
#include "oraclekit/rng.hpp"

namespace oraclekit {

/// Truth-table satisfiability; independent of every oracle backend.
inline bool satisfiable_by_enumeration(const CnfFormula& cnf, std::size_t guard = 22) {
    const Var n = cnf.variable_count();
    if (n > guard)
        throw GuardExceeded("truth table over " + std::to_string(n) + " variables exceeds guard");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> masks; // (positive, negative)
    for (const auto& c : cnf.clauses()) {
        std::uint32_t pos = 0, neg = 0;
        for (const Literal l : c)
            (l.positive ? pos : neg) |= 1U << (l.var - 1);
        masks.emplace_back(pos, neg);
    }
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t a = 0; a < total; ++a) {
        const auto x = static_cast<std::uint32_t>(a);
        if (std::all_of(masks.begin(), masks.end(), [x](auto m) { return (x & m.first) != 0 || (~x & m.second) != 0; }))
            return true;
    }
    return false;
}

/// G(n, p): each pair u < v, in ascending order, is an edge with probability p.
inline Graph gen_random_graph(std::size_t n, double p, Rng& rng) {
    Graph g(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (rng.chance(p))
                g.add_edge(u, v);
    return g;
}

inline Graph gen_random_weighted_graph(std::size_t n, double p, Weight max_weight, Rng& rng) {
    Graph g = gen_random_graph(n, p, rng);
    for (Vertex v = 0; v < n; ++v)
        g.set_weight(v, 1 + rng.below(max_weight));
    return g;
}

/// Clauses of `width` distinct variables (capped at vars) with random polarity.
inline CnfFormula gen_random_cnf(Var vars, std::size_t clauses, std::size_t width, Rng& rng) {
    std::vector<Var> pool(vars);
    std::iota(pool.begin(), pool.end(), Var{1});
    const std::size_t len = std::min<std::size_t>(width, vars);
    std::vector<LiteralList> rows;
    for (std::size_t c = 0; c < clauses; ++c) {
        for (std::size_t i = 0; i < len; ++i)
            std::swap(pool[i], pool[i + rng.below(vars - i)]);
        LiteralList clause;
        for (std::size_t i = 0; i < len; ++i)
            clause.push_back({pool[i], rng.coin()});
        std::sort(clause.begin(), clause.end());
        rows.push_back(std::move(clause));
    }
    return {std::move(rows), vars};
}

/// Random CNF over at most `max_vars` variables whose satisfiability equals
/// `answer`, confirmed by truth table.
inline CnfFormula gen_cnf_with_answer(bool answer, Var max_vars, Rng& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const Var vars = static_cast<Var>(rng.between(1, static_cast<int>(max_vars)));
        const std::size_t width = static_cast<std::size_t>(rng.between(1, 3));
        const std::size_t clauses = answer ? static_cast<std::size_t>(rng.between(0, 2 * static_cast<int>(vars)))
                                           : static_cast<std::size_t>(rng.between(2 * static_cast<int>(vars),
                                                                                  6 * static_cast<int>(vars) + 2));
        CnfFormula cnf = gen_random_cnf(vars, clauses, width, rng);
        if (satisfiable_by_enumeration(cnf) == answer)
            return cnf;
    }
    return make_trivial_cnf(answer);
}

/// Greedy minimal vertex cover: start from V, drop vertices in random order
/// whenever all their neighbors remain.
inline VertexSet random_minimal_cover(const Graph& g, Rng& rng) {
    std::vector<Vertex> order(g.size());
    std::iota(order.begin(), order.end(), Vertex{0});
    rng.shuffle(order);
    std::vector<char> in(g.size(), 1);
    for (Vertex v : order) {
        const auto& nb = g.neighbors(v);
        if (std::all_of(nb.begin(), nb.end(), [&](Vertex u) { return in[u] != 0; }))
            in[v] = 0;
    }
    VertexSet out;
    for (Vertex v = 0; v < g.size(); ++v)
        if (in[v])
            out.push_back(v);
    return out;
}

/// Graph incidence spec hiding `g`: satisfiable CNFs on edges, unsatisfiable
/// CNFs elsewhere, each over at most `max_vars` variables.
inline IncidenceSpec gen_hidden_graph_spec(const Graph& g, Var max_vars, Rng& rng) {
    IncidenceSpec spec = IncidenceSpec::graph_edges(g.size());
    for (auto [u, v] : spec.pairs())
        spec.set(u, v, gen_cnf_with_answer(g.adjacent(static_cast<Vertex>(u), static_cast<Vertex>(v)), max_vars, rng));
    return spec;
}

struct DvcrGenOptions {
    int min_vertices = 4;
    int max_vertices = 12;
    std::size_t max_k = 5;
    Var max_cnf_vars = 6;
};

inline DvcrInstance gen_random_dvcr(std::uint64_t seed, const DvcrGenOptions& opt = {}) {
    Rng rng(seed);
    const auto n = static_cast<std::size_t>(rng.between(opt.min_vertices, opt.max_vertices));
    const double p = 0.1 + 0.05 * static_cast<double>(rng.below(6));
    const Graph g = gen_random_graph(n, p, rng);
    DvcrInstance out;
    out.n = n;
    out.s = random_minimal_cover(g, rng);
    out.t = random_minimal_cover(g, rng);
    out.k = std::min(opt.max_k, std::max(out.s.size(), out.t.size()) + rng.below(3));
    out.ell = BigInt(1 + rng.below(2 * n + 2));
    out.spec = gen_hidden_graph_spec(g, opt.max_cnf_vars, rng);
    return out;
}

struct CfvdGenOptions {
    int min_vertices = 1;
    int max_vertices = 9;
    int max_k = 4;
    int max_h = 3;
    bool weighted = false;
    Weight max_weight = 3;
};

inline CfvdInstance gen_random_cfvd(std::uint64_t seed, const CfvdGenOptions& opt = {}) {
    Rng rng(seed);
    const auto n = static_cast<std::size_t>(rng.between(opt.min_vertices, opt.max_vertices));
    const double p = 0.3 + 0.1 * static_cast<double>(rng.below(6));
    CfvdInstance out;
    out.weighted = opt.weighted;
    out.graph = opt.weighted ? gen_random_weighted_graph(n, p, opt.max_weight, rng) : gen_random_graph(n, p, rng);
    out.k = static_cast<Weight>(rng.between(1, opt.max_k));
    out.h = static_cast<Weight>(rng.between(0, opt.max_h));
    return out;
}

/// Unweighted inputs for the weighted composition: t graphs on n vertices
/// with shared (h, k), n > h, k >= 1.
inline std::vector<CfvdInstance> gen_wcfvd_inputs(std::size_t t, std::uint64_t seed, int min_n = 3, int max_n = 5) {
    Rng rng(seed);
    const auto n = static_cast<std::size_t>(rng.between(min_n, max_n));
    const auto h = static_cast<Weight>(rng.between(1, static_cast<int>(n) - 1));
    const auto k = static_cast<Weight>(rng.between(1, static_cast<int>(n) - 1));
    std::vector<CfvdInstance> out;
    for (std::size_t i = 0; i < t; ++i) {
        const double p = 0.4 + 0.1 * static_cast<double>(rng.below(7));
        out.push_back({gen_random_graph(n, p, rng), h, k, false});
    }
    return out;
}

} // namespace oraclekit
