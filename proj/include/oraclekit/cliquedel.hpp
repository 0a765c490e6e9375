#pragma once

// (Weighted) Clique-Free Vertex Deletion: delete vertices of total weight at
// most h so that no clique of size (weight) exactly k survives.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "oraclekit/graph.hpp"
#include "oraclekit/oracle.hpp"

namespace oraclekit {

inline constexpr std::string_view kPhaseCfvdSearch = "cfvd-search";
inline constexpr std::string_view kPhaseCfvdKernel = "kernel-cfvd";

inline constexpr std::size_t kDefaultCfvdGuard = 12;

struct CfvdInstance {
    Graph graph;
    Weight h = 0; // deletion budget (total weight)
    Weight k = 1; // clique size, or clique weight in weighted mode
    bool weighted = false;

    void validate() const {
        if (k < 1)
            throw InvalidInstance("clique parameter k must be at least 1");
        if (!weighted && !graph.has_unit_weights())
            throw InvalidInstance("unweighted instance carries non-unit weights");
    }

    friend bool operator==(const CfvdInstance&, const CfvdInstance&) = default;
};

/// Exact weight k is normative. AtLeast exists for comparison experiments.
enum class CliqueSemantics { Exact, AtLeast };

namespace detail {

inline Weight clique_measure(const Graph& g, Vertex v, bool weighted) { return weighted ? g.weight(v) : 1; }

// Calls `emit` for every target clique among `alive` vertices: measure exactly
// k (Exact) or the ascending-order prefix at which the measure first reaches
// k (AtLeast; hitting these hits every heavier clique). Returns false if
// `emit` asked to stop.
inline bool enumerate_target_cliques(const Graph& g, Weight k, bool weighted, CliqueSemantics sem,
                                     const std::vector<char>& alive,
                                     const std::function<bool(const VertexSet&)>& emit) {
    VertexSet current;
    std::function<bool(const std::vector<Vertex>&, Weight)> extend = [&](const std::vector<Vertex>& cands,
                                                                          Weight measure) -> bool {
        for (std::size_t i = 0; i < cands.size(); ++i) {
            const Vertex v = cands[i];
            const Weight m = measure + clique_measure(g, v, weighted);
            if (sem == CliqueSemantics::Exact && m > k)
                continue;
            current.push_back(v);
            if (m >= k) {
                if (!emit(current))
                    return false;
            } else {
                std::vector<Vertex> next;
                for (std::size_t j = i + 1; j < cands.size(); ++j)
                    if (g.adjacent(v, cands[j]))
                        next.push_back(cands[j]);
                if (!extend(next, m))
                    return false;
            }
            current.pop_back();
        }
        return true;
    };
    std::vector<Vertex> all;
    for (Vertex v = 0; v < g.size(); ++v)
        if (alive.empty() || alive[v])
            all.push_back(v);
    return extend(all, 0);
}

inline std::vector<VertexSet> target_cliques(const Graph& g, Weight k, bool weighted, CliqueSemantics sem,
                                             std::size_t limit = SIZE_MAX) {
    std::vector<VertexSet> out;
    enumerate_target_cliques(g, k, weighted, sem, {}, [&](const VertexSet& c) {
        if (out.size() >= limit)
            throw GuardExceeded("more than " + std::to_string(limit) + " target cliques");
        out.push_back(c);
        return true;
    });
    return out;
}

} // namespace detail

/// Number of cliques of size exactly k (weight exactly k when weighted).
inline std::uint64_t count_k_cliques_bruteforce(const Graph& g, Weight k, bool weighted,
                                                std::size_t guard = kDefaultCfvdGuard) {
    if (g.size() > guard)
        throw GuardExceeded("clique count on " + std::to_string(g.size()) + " vertices exceeds guard " +
                            std::to_string(guard));
    std::uint64_t count = 0;
    detail::enumerate_target_cliques(g, k, weighted, CliqueSemantics::Exact, {}, [&](const VertexSet&) {
        ++count;
        return true;
    });
    return count;
}

/// Exhaustive over all deletion sets within budget. No oracle.
inline bool solve_cfvd_bruteforce(const CfvdInstance& inst, std::size_t guard = kDefaultCfvdGuard,
                                  CliqueSemantics sem = CliqueSemantics::Exact) {
    inst.validate();
    const Graph& g = inst.graph;
    if (g.size() > guard || g.size() > 30)
        throw GuardExceeded("brute force on " + std::to_string(g.size()) + " vertices exceeds guard " +
                            std::to_string(guard));
    std::vector<std::uint32_t> cliques;
    for (const auto& c : detail::target_cliques(g, inst.k, inst.weighted, sem)) {
        std::uint32_t mask = 0;
        for (Vertex v : c)
            mask |= 1U << v;
        cliques.push_back(mask);
    }
    const std::uint32_t subsets = 1U << g.size();
    for (std::uint32_t del = 0; del < subsets; ++del) {
        Weight w = 0;
        for (std::uint32_t rest = del; rest != 0; rest &= rest - 1)
            w += g.weight(static_cast<Vertex>(std::countr_zero(rest)));
        if (w > inst.h)
            continue;
        if (std::all_of(cliques.begin(), cliques.end(), [del](std::uint32_t c) { return (c & del) != 0; }))
            return true;
    }
    return false;
}

/// Second exhaustive decider for graphs too large for subset enumeration:
/// lists every target clique, then decides weighted hitting set within budget
/// h by branch and bound (branch on the smallest unhit clique, earlier
/// siblings' vertices forbidden in later branches, disjoint-packing lower bound).
inline bool solve_cfvd_by_hitting_set(const CfvdInstance& inst, std::size_t clique_guard = 1'000'000,
                                      CliqueSemantics sem = CliqueSemantics::Exact) {
    inst.validate();
    const Graph& g = inst.graph;
    const auto cliques = detail::target_cliques(g, inst.k, inst.weighted, sem, clique_guard);
    std::vector<std::vector<std::uint32_t>> containing(g.size());
    for (std::uint32_t c = 0; c < cliques.size(); ++c)
        for (Vertex v : cliques[c])
            containing[v].push_back(c);

    std::vector<std::uint32_t> hits(cliques.size(), 0);
    std::vector<char> forbidden(g.size(), 0);
    std::vector<char> used(g.size(), 0);

    auto min_allowed = [&](std::uint32_t c) {
        Weight best = UINT64_MAX;
        for (Vertex v : cliques[c])
            if (!forbidden[v])
                best = std::min(best, g.weight(v));
        return best;
    };

    std::function<bool(Weight)> search = [&](Weight budget) -> bool {
        // Pick the unhit clique with the fewest allowed vertices; bound by a
        // greedy vertex-disjoint packing of unhit cliques.
        std::optional<std::uint32_t> pick;
        std::size_t pick_allowed = SIZE_MAX;
        Weight packing = 0;
        std::fill(used.begin(), used.end(), 0);
        for (std::uint32_t c = 0; c < cliques.size(); ++c) {
            if (hits[c] != 0)
                continue;
            std::size_t allowed = 0;
            bool disjoint = true;
            for (Vertex v : cliques[c]) {
                allowed += forbidden[v] ? 0 : 1;
                disjoint = disjoint && !used[v];
            }
            if (allowed == 0)
                return false;
            if (allowed < pick_allowed) {
                pick_allowed = allowed;
                pick = c;
            }
            if (disjoint) {
                packing += min_allowed(c);
                if (packing > budget)
                    return false;
                for (Vertex v : cliques[c])
                    used[v] = 1;
            }
        }
        if (!pick)
            return true;
        std::vector<Vertex> tried;
        bool found = false;
        for (Vertex v : cliques[*pick]) {
            if (forbidden[v])
                continue;
            if (g.weight(v) <= budget) {
                for (auto c : containing[v])
                    ++hits[c];
                found = search(budget - g.weight(v));
                for (auto c : containing[v])
                    --hits[c];
            }
            if (found)
                break;
            forbidden[v] = 1;
            tried.push_back(v);
        }
        for (Vertex v : tried)
            forbidden[v] = 0;
        return found;
    };
    return search(inst.h);
}

namespace detail {

// Clause builder where std::nullopt stands for the constant false literal.
class ClauseSink {
public:
    void add(std::initializer_list<std::optional<Literal>> lits) {
        LiteralList clause;
        for (const auto& l : lits)
            if (l)
                clause.push_back(*l);
        clauses.push_back(std::move(clause));
    }
    std::vector<LiteralList> clauses;
};

} // namespace detail

/// SAT encoding of "some clique among the alive vertices has size (weight)
/// exactly k and contains `forced`". Variable v+1 selects vertex v; a
/// sequential counter over the selection variables, each repeated weight
/// times, pins the total to exactly k.
inline CnfFormula encode_clique_query(const Graph& g, Weight k, bool weighted, const std::vector<char>& alive,
                                      std::optional<Vertex> forced) {
    const auto n = static_cast<Var>(g.size());
    detail::ClauseSink sink;
    auto sel = [](Vertex v) { return Literal{static_cast<Var>(v + 1), true}; };
    auto is_alive = [&](Vertex v) { return alive.empty() || alive[v] != 0; };

    std::vector<Vertex> items; // one entry per unit of weight
    for (Vertex v = 0; v < n; ++v) {
        if (!is_alive(v)) {
            sink.add({~sel(v)});
            continue;
        }
        for (Weight r = 0; r < detail::clique_measure(g, v, weighted); ++r)
            items.push_back(v);
        for (Vertex u = v + 1; u < n; ++u)
            if (is_alive(u) && !g.adjacent(u, v))
                sink.add({~sel(v), ~sel(u)});
    }
    if (forced)
        sink.add({sel(*forced)});

    const std::size_t m = items.size();
    if (k > m) {
        sink.add({}); // total alive weight cannot reach k
        return {std::move(sink.clauses), n};
    }
    // counter(i, j) <=> at least j of the first i items are selected; i in 1..m, j in 1..k.
    const auto kk = static_cast<std::size_t>(k);
    auto counter = [&](std::size_t i, std::size_t j) -> std::optional<Literal> {
        if (i == 0)
            return std::nullopt;
        return Literal{static_cast<Var>(n + (i - 1) * kk + j), true};
    };
    for (std::size_t i = 1; i <= m; ++i) {
        const Literal x = sel(items[i - 1]);
        for (std::size_t j = 1; j <= kk; ++j) {
            const Literal r = *counter(i, j);
            if (i > 1)
                sink.add({~*counter(i - 1, j), r});
            if (j == 1)
                sink.add({~x, r});
            else if (i > 1)
                sink.add({~x, ~*counter(i - 1, j - 1), r});
            sink.add({~r, counter(i - 1, j), x});
            if (j > 1)
                sink.add({~r, counter(i - 1, j), counter(i - 1, j - 1)});
        }
        if (i > 1)
            sink.add({~x, ~*counter(i - 1, kk)});
    }
    sink.add({counter(m, kk)});
    return {std::move(sink.clauses), static_cast<Var>(n + m * kk)};
}

namespace detail {

inline std::optional<VertexSet> find_clique_alive(const Graph& g, Weight k, bool weighted, const std::vector<char>& alive,
                                                  std::optional<Vertex> forced, const OracleBackend& backend,
                                                  OracleLedger& ledger, std::string_view phase) {
    const CnfFormula query = encode_clique_query(g, k, weighted, alive, forced);
    OracleVerdict verdict = query_sat(backend, ledger, query, phase);
    if (!verdict.satisfiable)
        return std::nullopt;
    if (!verdict.model)
        throw OracleFailure("oracle reported a clique but returned no model");
    VertexSet clique;
    for (Vertex v = 0; v < g.size(); ++v)
        if (*verdict.model->value(static_cast<Var>(v + 1)))
            clique.push_back(v);
    Weight measure = 0;
    for (Vertex v : clique)
        measure += clique_measure(g, v, weighted);
    const bool alive_ok =
        std::all_of(clique.begin(), clique.end(), [&](Vertex v) { return alive.empty() || alive[v]; });
    const bool has_forced = !forced || std::binary_search(clique.begin(), clique.end(), *forced);
    if (!g.is_clique(clique) || measure != k || !alive_ok || !has_forced)
        throw IntegrityError("oracle model does not decode to a valid clique");
    return clique;
}

} // namespace detail

/// One oracle query: a clique of size (weight) exactly k, containing `forced` if given.
inline std::optional<VertexSet> find_clique_via_oracle(const Graph& g, Weight k, bool weighted,
                                                       const OracleBackend& backend, OracleLedger& ledger,
                                                       std::optional<Vertex> forced = std::nullopt,
                                                       std::string_view phase = "clique") {
    if (k < 1)
        throw InvalidInstance("clique parameter k must be at least 1");
    if (forced && *forced >= g.size())
        throw InvalidInstance("forced vertex out of range");
    return detail::find_clique_alive(g, k, weighted, {}, forced, backend, ledger, phase);
}

/// Bounded search tree: find a target clique with one query, branch on which
/// of its vertices (ascending) to delete. Depth <= h, width <= k.
inline bool solve_cfvd_searchtree(const CfvdInstance& inst, const OracleBackend& backend, OracleLedger& ledger) {
    inst.validate();
    const Graph& g = inst.graph;
    std::vector<char> alive(g.size(), 1);
    std::function<bool(Weight)> search = [&](Weight budget) -> bool {
        auto clique =
            detail::find_clique_alive(g, inst.k, inst.weighted, alive, std::nullopt, backend, ledger, kPhaseCfvdSearch);
        if (!clique)
            return true;
        for (Vertex v : *clique) {
            if (g.weight(v) > budget)
                continue;
            alive[v] = 0;
            const bool ok = search(budget - g.weight(v));
            alive[v] = 1;
            if (ok)
                return true;
        }
        return false;
    };
    return search(inst.h);
}

/// Drops every vertex that lies in no target clique, one membership query
/// per original vertex. Survivors keep their order and weights; h, k unchanged.
inline CfvdInstance kernelize_cfvd(const CfvdInstance& inst, const OracleBackend& backend, OracleLedger& ledger) {
    inst.validate();
    std::vector<Vertex> keep;
    for (Vertex v = 0; v < inst.graph.size(); ++v)
        if (detail::find_clique_alive(inst.graph, inst.k, inst.weighted, {}, v, backend, ledger, kPhaseCfvdKernel))
            keep.push_back(v);
    return {inst.graph.induced(keep), inst.h, inst.k, inst.weighted};
}

/// Optional pass: if deleting the lightest vertex of every target clique fits
/// in the budget, the instance is a yes-instance; returns the empty-graph
/// trivial instance in that case. Counts cliques by enumeration.
inline std::optional<CfvdInstance> budget_short_circuit(const CfvdInstance& inst, std::size_t guard = kDefaultCfvdGuard) {
    inst.validate();
    if (inst.graph.size() > guard)
        throw GuardExceeded("clique enumeration on " + std::to_string(inst.graph.size()) + " vertices exceeds guard");
    Weight needed = 0;
    for (const auto& c : detail::target_cliques(inst.graph, inst.k, inst.weighted, CliqueSemantics::Exact)) {
        Weight lightest = UINT64_MAX;
        for (Vertex v : c)
            lightest = std::min(lightest, inst.graph.weight(v));
        needed += lightest;
    }
    if (needed > inst.h)
        return std::nullopt;
    return CfvdInstance{Graph(0), 0, inst.k, inst.weighted};
}

/// Parameters of the weighted OR-composition for t' inputs of shape (n, h, k).
struct WcfvdComposition {
    std::size_t padded_count;   // t' (power of two >= 4)
    std::size_t selector_bits;  // log t'
    Weight h_star;              // h + n log t'
    Weight k_star;              // k + n log t'
    Weight selector_weight;     // n
    Weight dummy_weight;        // k + n (log t' - 2)
    std::size_t dummies_per_bit; // h_star + 1
};

inline WcfvdComposition wcfvd_composition_shape(std::size_t t, std::size_t n, Weight h, Weight k) {
    WcfvdComposition s{};
    s.padded_count = std::max<std::size_t>(4, std::bit_ceil(t));
    s.selector_bits = static_cast<std::size_t>(std::countr_zero(s.padded_count));
    s.h_star = h + n * s.selector_bits;
    s.k_star = k + n * s.selector_bits;
    s.selector_weight = n;
    s.dummy_weight = k + n * (s.selector_bits - 2);
    s.dummies_per_bit = static_cast<std::size_t>(s.h_star) + 1;
    return s;
}

/// OR-composition of unweighted instances sharing (n, h, k), n > h >= 1 and
/// n > k >= 1, into one weighted instance. Vertex layout of the output:
/// the t' input graphs in order (input i at i*n..), then selector pairs
/// (v_1, v_1', v_2, v_2', ...), then h*+1 dummies per selector pair.
inline CfvdInstance compose_wcfvd_or(std::span<const CfvdInstance> instances) {
    if (instances.empty())
        throw InvalidInstance("composition needs at least one instance");
    const CfvdInstance& first = instances.front();
    const std::size_t n = first.graph.size();
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& in = instances[i];
        in.validate();
        if (in.weighted || !in.graph.has_unit_weights())
            throw InvalidInstance("composition inputs must be unweighted");
        if (in.graph.size() != n || in.h != first.h || in.k != first.k)
            throw InvalidInstance("instance " + std::to_string(i + 1) + " does not share (n, h, k) with the first");
    }
    if (!(first.h >= 1 && first.h < n && first.k >= 1 && first.k < n))
        throw InvalidInstance("composition requires n > h >= 1 and n > k >= 1");

    const WcfvdComposition s = wcfvd_composition_shape(instances.size(), n, first.h, first.k);
    const std::size_t graphs_end = s.padded_count * n;
    const std::size_t selectors_end = graphs_end + 2 * s.selector_bits;
    const std::size_t total = selectors_end + s.dummies_per_bit * s.selector_bits;
    Graph g(total);

    for (std::size_t i = 0; i < s.padded_count; ++i) {
        const Graph& src = instances[i < instances.size() ? i : 0].graph;
        const auto offset = static_cast<Vertex>(i * n);
        for (auto [u, v] : src.edges())
            g.add_edge(offset + u, offset + v);
    }
    auto selector = [&](std::size_t bit, bool primed) {
        return static_cast<Vertex>(graphs_end + 2 * bit + (primed ? 1 : 0));
    };
    for (Vertex a = static_cast<Vertex>(graphs_end); a < selectors_end; ++a) {
        g.set_weight(a, s.selector_weight);
        for (Vertex b = a + 1; b < selectors_end; ++b)
            g.add_edge(a, b);
    }
    for (std::size_t bit = 0; bit < s.selector_bits; ++bit) {
        for (std::size_t d = 0; d < s.dummies_per_bit; ++d) {
            const auto dummy = static_cast<Vertex>(selectors_end + bit * s.dummies_per_bit + d);
            g.set_weight(dummy, s.dummy_weight);
            g.add_edge(dummy, selector(bit, false));
            g.add_edge(dummy, selector(bit, true));
        }
    }
    for (std::size_t i = 0; i < s.padded_count; ++i)
        for (std::size_t bit = 0; bit < s.selector_bits; ++bit) {
            const Vertex sv = selector(bit, ((i >> bit) & 1U) == 0);
            for (std::size_t v = 0; v < n; ++v)
                g.add_edge(static_cast<Vertex>(i * n + v), sv);
        }
    return {std::move(g), s.h_star, s.k_star, true};
}

} // namespace oraclekit
