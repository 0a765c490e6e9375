#pragma once

// Discovery problems: the input structure is hidden behind one CNF instance
// per candidate incidence, present iff that CNF is satisfiable. Includes
// the vertex-cover full kernel, reconfiguration kernel and BFS decider, the
// four-vertex SAT gadget and the generic kernel wrapper.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "oraclekit/cliquedel.hpp"
#include "oraclekit/formula.hpp"
#include "oraclekit/graph.hpp"
#include "oraclekit/oracle.hpp"

namespace oraclekit {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::string_view kPhaseDiscover = "discover";

/// Constant-size Satisfiability instances: yes is the empty clause list, no is x1 ∧ ¬x1.
inline CnfFormula make_trivial_cnf(bool answer) {
    if (answer)
        return {{}, 0};
    return CnfFormula::from_ints({{1}, {-1}});
}

enum class IncidenceKind { GraphEdges, LiteralInClause, ElementInSet };

/// One CNF per candidate incidence (row, col). GraphEdges: rows = cols = n and
/// only unordered pairs u < v exist. LiteralInClause: row 2(i-1) is x_i, row
/// 2(i-1)+1 is ¬x_i, columns are clauses. ElementInSet: rows are elements,
/// columns are sets. Every CNF defaults to trivial-no.
class IncidenceSpec {
public:
    IncidenceSpec() = default;
    IncidenceSpec(IncidenceKind kind, std::size_t rows, std::size_t cols)
        : kind_(kind), rows_(rows), cols_(cols), cnfs_(rows * cols, make_trivial_cnf(false)) {
        if (kind == IncidenceKind::GraphEdges && rows != cols)
            throw InvalidInstance("graph incidence needs a square index set");
        if (kind == IncidenceKind::LiteralInClause && rows % 2 != 0)
            throw InvalidInstance("literal rows come in positive/negative pairs");
    }

    static IncidenceSpec graph_edges(std::size_t n) { return {IncidenceKind::GraphEdges, n, n}; }

    IncidenceKind kind() const { return kind_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    /// Candidate incidences in canonical order (row-major; u < v for graphs).
    std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = kind_ == IncidenceKind::GraphEdges ? r + 1 : 0; c < cols_; ++c)
                out.emplace_back(r, c);
        return out;
    }
    std::size_t pair_count() const {
        return kind_ == IncidenceKind::GraphEdges ? rows_ * (rows_ == 0 ? 0 : rows_ - 1) / 2 : rows_ * cols_;
    }

    const CnfFormula& at(std::size_t r, std::size_t c) const { return cnfs_[index(r, c)]; }
    void set(std::size_t r, std::size_t c, CnfFormula cnf) { cnfs_[index(r, c)] = std::move(cnf); }

    friend bool operator==(const IncidenceSpec&, const IncidenceSpec&) = default;

private:
    std::size_t index(std::size_t r, std::size_t c) const {
        if (kind_ == IncidenceKind::GraphEdges) {
            if (r == c)
                throw InvalidInstance("graph incidence pair needs distinct vertices");
            if (r > c)
                std::swap(r, c);
        }
        if (r >= rows_ || c >= cols_)
            throw InvalidInstance("incidence pair out of range");
        return r * cols_ + c;
    }

    IncidenceKind kind_ = IncidenceKind::GraphEdges;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<CnfFormula> cnfs_;
};

struct ClauseFamily {
    std::size_t variables = 0;
    std::vector<LiteralList> clauses;
    friend bool operator==(const ClauseFamily&, const ClauseFamily&) = default;
};

struct SetFamily {
    std::size_t elements = 0;
    std::vector<std::vector<std::size_t>> sets; // sorted member lists
    friend bool operator==(const SetFamily&, const SetFamily&) = default;
};

using DiscoveredStructure = std::variant<Graph, ClauseFamily, SetFamily>;

struct IncidenceTable {
    IncidenceKind kind = IncidenceKind::GraphEdges;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<char> present; // row-major

    bool at(std::size_t r, std::size_t c) const {
        if (kind == IncidenceKind::GraphEdges && r > c)
            std::swap(r, c);
        return present[r * cols + c] != 0;
    }

    DiscoveredStructure structure() const {
        switch (kind) {
        case IncidenceKind::GraphEdges: {
            Graph g(rows);
            for (Vertex u = 0; u < rows; ++u)
                for (Vertex v = u + 1; v < rows; ++v)
                    if (at(u, v))
                        g.add_edge(u, v);
            return g;
        }
        case IncidenceKind::LiteralInClause: {
            ClauseFamily f{rows / 2, std::vector<LiteralList>(cols)};
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c)
                    if (at(r, c))
                        f.clauses[c].push_back({static_cast<Var>(r / 2 + 1), r % 2 == 0});
            return f;
        }
        case IncidenceKind::ElementInSet: {
            SetFamily f{rows, std::vector<std::vector<std::size_t>>(cols)};
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c)
                    if (at(r, c))
                        f.sets[c].push_back(r);
            return f;
        }
        }
        throw InvalidInstance("unknown incidence kind");
    }

    Graph graph() const {
        if (kind != IncidenceKind::GraphEdges)
            throw InvalidInstance("incidence table does not describe a graph");
        return std::get<Graph>(structure());
    }
};

/// One query per candidate incidence, in canonical pair order.
inline IncidenceTable discover_incidences(const IncidenceSpec& spec, const OracleBackend& backend,
                                          OracleLedger& ledger) {
    IncidenceTable table{spec.kind(), spec.rows(), spec.cols(), std::vector<char>(spec.rows() * spec.cols(), 0)};
    for (auto [r, c] : spec.pairs())
        table.present[r * spec.cols() + c] = query_sat(backend, ledger, spec.at(r, c), kPhaseDiscover).satisfiable;
    return table;
}

inline Graph discover_graph(const IncidenceSpec& spec, const OracleBackend& backend, OracleLedger& ledger) {
    return discover_incidences(spec, backend, ledger).graph();
}

/// Encodes a concrete structure with trivial yes/no CNFs.
inline IncidenceSpec wrap_structure(const DiscoveredStructure& s) {
    if (const auto* g = std::get_if<Graph>(&s)) {
        IncidenceSpec spec = IncidenceSpec::graph_edges(g->size());
        for (auto [u, v] : g->edges())
            spec.set(u, v, make_trivial_cnf(true));
        return spec;
    }
    if (const auto* f = std::get_if<ClauseFamily>(&s)) {
        IncidenceSpec spec(IncidenceKind::LiteralInClause, 2 * f->variables, f->clauses.size());
        for (std::size_t c = 0; c < f->clauses.size(); ++c)
            for (const Literal l : f->clauses[c])
                spec.set(2 * (l.var - 1) + (l.positive ? 0 : 1), c, make_trivial_cnf(true));
        return spec;
    }
    const auto& f = std::get<SetFamily>(s);
    IncidenceSpec spec(IncidenceKind::ElementInSet, f.elements, f.sets.size());
    for (std::size_t c = 0; c < f.sets.size(); ++c)
        for (std::size_t e : f.sets[c])
            spec.set(e, c, make_trivial_cnf(true));
    return spec;
}

/// A discovery instance: hidden structure plus the base problem's parameters.
template <class Params>
struct DiscoveryInstance {
    IncidenceSpec spec;
    Params params;
};

/// Discover, run the base kernelizer on the concrete structure, re-wrap the
/// kernel with trivial CNFs. `kernelizer(structure, params)` returns the
/// kernel structure and its parameters.
template <class Params, class Kernelizer>
DiscoveryInstance<Params> discovery_kernel_wrap(const DiscoveryInstance<Params>& inst, Kernelizer&& kernelizer,
                                                const OracleBackend& backend, OracleLedger& ledger) {
    const DiscoveredStructure concrete = discover_incidences(inst.spec, backend, ledger).structure();
    auto [kernel, params] = kernelizer(concrete, inst.params);
    return {wrap_structure(kernel), std::move(params)};
}

/// Parameter-free form.
inline IncidenceSpec discovery_kernel_wrap(const IncidenceSpec& spec,
                                           const std::function<DiscoveredStructure(const DiscoveredStructure&)>& kernelizer,
                                           const OracleBackend& backend, OracleLedger& ledger) {
    return wrap_structure(kernelizer(discover_incidences(spec, backend, ledger).structure()));
}

/// Discovery CFVD parameters. Weights are indexed by vertex; empty means unit.
struct CfvdParams {
    Weight h = 0;
    Weight k = 1;
    bool weighted = false;
    std::vector<Weight> weights;

    friend bool operator==(const CfvdParams&, const CfvdParams&) = default;
};

inline CfvdInstance cfvd_from_discovered(const Graph& discovered, const CfvdParams& p) {
    Graph g = discovered;
    for (Vertex v = 0; v < p.weights.size() && v < g.size(); ++v)
        g.set_weight(v, p.weights[v]);
    return {std::move(g), p.h, p.k, p.weighted};
}

/// Base kernelizer for discovery CFVD: the membership-query vertex kernel.
inline auto cfvd_base_kernelizer(const OracleBackend& backend, OracleLedger& ledger) {
    return [&backend, &ledger](const DiscoveredStructure& s, const CfvdParams& p) {
        const CfvdInstance out = kernelize_cfvd(cfvd_from_discovered(std::get<Graph>(s), p), backend, ledger);
        CfvdParams q{out.h, out.k, out.weighted, {}};
        if (out.weighted)
            for (Vertex v = 0; v < out.graph.size(); ++v)
                q.weights.push_back(out.graph.weight(v));
        Graph bare(out.graph.size());
        for (auto [u, v] : out.graph.edges())
            bare.add_edge(u, v);
        return std::pair<DiscoveredStructure, CfvdParams>{std::move(bare), std::move(q)};
    };
}

// ---------------------------------------------------------------------------
// Vertex cover helpers and the full kernel

inline bool is_vertex_cover(const Graph& g, const VertexSet& cover) {
    std::vector<char> in(g.size(), 0);
    for (Vertex v : cover)
        in[v] = 1;
    for (auto [u, v] : g.edges())
        if (!in[u] && !in[v])
            return false;
    return true;
}

/// Cover from which no single vertex can be dropped.
inline bool is_minimal_vertex_cover(const Graph& g, const VertexSet& cover) {
    if (!is_vertex_cover(g, cover))
        return false;
    std::vector<char> in(g.size(), 0);
    for (Vertex v : cover)
        in[v] = 1;
    for (Vertex v : cover) {
        const auto& nb = g.neighbors(v);
        if (std::all_of(nb.begin(), nb.end(), [&](Vertex u) { return in[u] != 0; }))
            return false;
    }
    return true;
}

struct FullKernel {
    Graph reduced;                  // H and non-isolated rest first (ascending), then pendants
    VertexSet forced;               // H, in original labels
    std::vector<Vertex> original_of; // reduced vertex -> original vertex, for non-pendant vertices
};

/// High-degree rule to a fixpoint, edge-count infeasibility test, then k+1
/// pendants on every forced vertex so the reduced graph keeps H forced.
inline std::optional<FullKernel> vc_full_kernel(const Graph& g, std::size_t k) {
    std::vector<char> in_h(g.size(), 0);
    std::size_t h_size = 0;
    auto residual_degree = [&](Vertex v) {
        std::size_t d = 0;
        for (Vertex u : g.neighbors(v))
            d += in_h[u] ? 0 : 1;
        return d;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (Vertex v = 0; v < g.size(); ++v) {
            if (in_h[v] || h_size > k)
                continue;
            if (residual_degree(v) > k - h_size) {
                in_h[v] = 1;
                ++h_size;
                changed = true;
            }
        }
    }
    if (h_size > k)
        return std::nullopt;
    std::size_t rest_edges = 0;
    for (auto [u, v] : g.edges())
        rest_edges += (!in_h[u] && !in_h[v]) ? 1 : 0;
    const std::size_t slack = k - h_size;
    if (rest_edges > slack * slack)
        return std::nullopt;

    FullKernel out;
    for (Vertex v = 0; v < g.size(); ++v) {
        if (in_h[v])
            out.forced.push_back(v);
        if (in_h[v] || residual_degree(v) > 0)
            out.original_of.push_back(v);
    }
    const std::size_t core = out.original_of.size();
    const std::size_t total = core + out.forced.size() * (k + 1);
    Graph reduced(total);
    Graph induced = g.induced(out.original_of);
    for (auto [u, v] : induced.edges())
        reduced.add_edge(u, v);
    Vertex next = static_cast<Vertex>(core);
    for (Vertex h : out.forced) {
        const auto pos = static_cast<Vertex>(
            std::lower_bound(out.original_of.begin(), out.original_of.end(), h) - out.original_of.begin());
        for (std::size_t p = 0; p <= k; ++p)
            reduced.add_edge(pos, next++);
    }
    out.reduced = std::move(reduced);
    return out;
}

// ---------------------------------------------------------------------------
// Discovery Vertex Cover Reconfiguration

struct DvcrInstance {
    std::size_t n = 0;
    IncidenceSpec spec;
    VertexSet s; // 0-based, sorted
    VertexSet t;
    std::size_t k = 0;
    BigInt ell = 1;

    void validate() const {
        if (spec.kind() != IncidenceKind::GraphEdges || spec.rows() != n)
            throw InvalidInstance("reconfiguration instance needs a graph incidence over its vertices");
        for (const VertexSet* set : {&s, &t})
            for (std::size_t i = 0; i < set->size(); ++i)
                if ((*set)[i] >= n || (i > 0 && (*set)[i - 1] >= (*set)[i]))
                    throw InvalidInstance("cover vertices must be sorted, distinct and in range");
        if (ell < 1)
            throw InvalidInstance("sequence length must be at least 1");
    }

    friend bool operator==(const DvcrInstance&, const DvcrInstance&) = default;
};

inline constexpr std::size_t kDefaultDvcrGuard = 20;
inline constexpr std::size_t kMaxDvcrVertices = 128;

struct ReconfResult {
    bool answer = false;
    std::optional<std::size_t> shortest; // number of covers in a shortest sequence
    std::vector<VertexSet> witness;      // a shortest sequence, when one exists
};

/// Breadth-first search over covers of size <= k, one vertex toggled per step
/// (vertices tried in ascending order). Answer: shortest length <= ell.
inline ReconfResult solve_dvcr_bfs(const Graph& g, const VertexSet& s, const VertexSet& t, std::size_t k,
                                   const BigInt& ell, std::size_t guard = kDefaultDvcrGuard) {
    if (g.size() > guard || g.size() > kMaxDvcrVertices)
        throw GuardExceeded("reconfiguration search on " + std::to_string(g.size()) + " vertices exceeds guard " +
                            std::to_string(std::min(guard, kMaxDvcrVertices)));
    ReconfResult result;
    if (s.size() > k || t.size() > k || !is_vertex_cover(g, s) || !is_vertex_cover(g, t))
        return result;

    using Mask = unsigned __int128;
    struct MaskHash {
        std::size_t operator()(Mask m) const {
            return std::hash<std::uint64_t>{}(static_cast<std::uint64_t>(m) ^
                                              (static_cast<std::uint64_t>(m >> 64) * 0x9e3779b97f4a7c15ULL));
        }
    };
    auto to_mask = [](const VertexSet& vs) {
        Mask m = 0;
        for (Vertex v : vs)
            m |= Mask{1} << v;
        return m;
    };
    auto to_set = [&](Mask m) {
        VertexSet vs;
        for (Vertex v = 0; v < g.size(); ++v)
            if ((m >> v) & 1U)
                vs.push_back(v);
        return vs;
    };
    std::vector<Mask> neighborhood(g.size(), 0);
    for (Vertex v = 0; v < g.size(); ++v)
        neighborhood[v] = to_mask(g.neighbors(v));

    const Mask start = to_mask(s);
    const Mask goal = to_mask(t);
    std::unordered_map<Mask, Mask, MaskHash> parent{{start, start}};
    std::deque<std::pair<Mask, std::size_t>> queue{{start, s.size()}};
    while (!queue.empty()) {
        auto [x, size] = queue.front();
        queue.pop_front();
        if (x == goal) {
            std::vector<VertexSet> path;
            for (Mask cur = goal;; cur = parent.at(cur)) {
                path.push_back(to_set(cur));
                if (cur == start)
                    break;
            }
            std::reverse(path.begin(), path.end());
            result.shortest = path.size();
            result.answer = BigInt(path.size()) <= ell;
            result.witness = std::move(path);
            return result;
        }
        for (Vertex v = 0; v < g.size(); ++v) {
            const Mask bit = Mask{1} << v;
            Mask next;
            std::size_t next_size;
            if (x & bit) {
                if ((neighborhood[v] & ~x) != 0)
                    continue; // removing v would uncover an edge
                next = x & ~bit;
                next_size = size - 1;
            } else {
                if (size + 1 > k)
                    continue;
                next = x | bit;
                next_size = size + 1;
            }
            if (parent.emplace(next, x).second)
                queue.emplace_back(next, next_size);
        }
    }
    return result;
}

/// Extends a sequence to exactly `length` covers by repeating the last one.
inline std::vector<VertexSet> pad_reconf_sequence(std::vector<VertexSet> seq, std::size_t length) {
    if (seq.empty() || seq.size() > length)
        throw InvalidInstance("cannot pad a sequence to a shorter length");
    while (seq.size() < length)
        seq.push_back(seq.back());
    return seq;
}

/// Checks every sequence invariant: endpoints, cover property, size bound,
/// single-vertex steps and exact length.
inline bool is_valid_reconf_sequence(const Graph& g, const std::vector<VertexSet>& seq, const VertexSet& s,
                                     const VertexSet& t, std::size_t k, std::size_t length) {
    if (seq.size() != length || seq.empty() || seq.front() != s || seq.back() != t)
        return false;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i].size() > k || !is_vertex_cover(g, seq[i]))
            return false;
        if (i > 0) {
            VertexSet diff;
            std::set_symmetric_difference(seq[i - 1].begin(), seq[i - 1].end(), seq[i].begin(), seq[i].end(),
                                          std::back_inserter(diff));
            if (diff.size() > 1)
                return false;
        }
    }
    return true;
}

/// Canonical no-instance: one edge, S = {1}, T = {2}, k = 0.
inline DvcrInstance trivial_no_dvcr() {
    DvcrInstance out{2, IncidenceSpec::graph_edges(2), {0}, {1}, 0, 1};
    out.spec.set(0, 1, make_trivial_cnf(true));
    return out;
}

/// Four-vertex gadget a, b, c, d (vertices 1..4): path edges a-b, b-c, c-d are
/// present, a-d is present iff phi is satisfiable; S = {a, c}, T = {b, d}, k = 3, ell = 5.
inline DvcrInstance gen_dvcr_from_cnf(const CnfFormula& phi) {
    DvcrInstance out{4, IncidenceSpec::graph_edges(4), {0, 2}, {1, 3}, 3, 5};
    out.spec.set(0, 1, make_trivial_cnf(true));
    out.spec.set(1, 2, make_trivial_cnf(true));
    out.spec.set(2, 3, make_trivial_cnf(true));
    out.spec.set(0, 3, phi);
    return out;
}

/// Discover the graph (C(n,2) queries), check the promise on S and T, then
/// restrict to the full kernel with trivial CNFs. ell is capped at 2^|V(G')|.
inline DvcrInstance kernelize_dvcr(const DvcrInstance& inst, const OracleBackend& backend, OracleLedger& ledger) {
    inst.validate();
    const Graph g = discover_graph(inst.spec, backend, ledger);
    if (!is_minimal_vertex_cover(g, inst.s))
        throw InvalidInstance("S is not a minimal vertex cover of the discovered graph");
    if (!is_minimal_vertex_cover(g, inst.t))
        throw InvalidInstance("T is not a minimal vertex cover of the discovered graph");
    if (inst.s.size() > inst.k || inst.t.size() > inst.k)
        return trivial_no_dvcr();
    const auto kernel = vc_full_kernel(g, inst.k);
    if (!kernel)
        return trivial_no_dvcr();

    auto relabel = [&](const VertexSet& vs) {
        VertexSet out;
        for (Vertex v : vs) {
            auto it = std::lower_bound(kernel->original_of.begin(), kernel->original_of.end(), v);
            if (it == kernel->original_of.end() || *it != v)
                throw IntegrityError("minimal cover vertex missing from the full kernel");
            out.push_back(static_cast<Vertex>(it - kernel->original_of.begin()));
        }
        return out;
    };
    const std::size_t n = kernel->reduced.size();
    DvcrInstance out{n, wrap_structure(kernel->reduced), relabel(inst.s), relabel(inst.t), inst.k, inst.ell};
    const BigInt cap = BigInt(1) << n;
    if (out.ell > cap)
        out.ell = cap;
    return out;
}

// ---------------------------------------------------------------------------
// Bundle format

namespace detail {

inline VertexSet parse_cover_line(const std::vector<std::string_view>& toks, std::size_t line, std::size_t n) {
    VertexSet out;
    if (toks.back() != "0")
        throw ParseError(line, "cover line must end with 0");
    for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
        long long v = parse_int(toks[i], line);
        if (v < 1 || v > static_cast<long long>(n))
            throw ParseError(line, "cover vertex " + std::string(toks[i]) + " out of range 1.." + std::to_string(n));
        out.push_back(static_cast<Vertex>(v - 1));
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw ParseError(line, "repeated cover vertex");
    return out;
}

inline std::string cover_line(char tag, const VertexSet& vs) {
    std::string out(1, tag);
    for (Vertex v : vs)
        out += " " + std::to_string(v + 1);
    return out + " 0\n";
}

} // namespace detail

inline DvcrInstance parse_dvcr_bundle(std::istream& in) {
    DvcrInstance out;
    std::string raw;
    std::size_t line = 0;
    bool have_header = false;
    std::optional<VertexSet> s, t;
    std::optional<std::size_t> k;
    std::optional<BigInt> ell;
    std::vector<char> seen_pair;

    while (std::getline(in, raw)) {
        ++line;
        auto toks = detail::split_tokens(raw);
        if (detail::is_comment_or_blank(toks))
            continue;
        if (!have_header) {
            if (toks.size() != 3 || toks[0] != "p" || toks[1] != "dvcr")
                throw ParseError(line, "expected header 'p dvcr <n>'");
            long long n = detail::parse_nonnegative(toks[2], line);
            if (n > 4096)
                throw ParseError(line, "vertex count too large");
            out.n = static_cast<std::size_t>(n);
            out.spec = IncidenceSpec::graph_edges(out.n);
            seen_pair.assign(out.n * out.n, 0);
            have_header = true;
            continue;
        }
        if (toks[0] == "s" || toks[0] == "t") {
            auto& slot = toks[0] == "s" ? s : t;
            if (slot)
                throw ParseError(line, "duplicate '" + std::string(toks[0]) + "' line");
            slot = detail::parse_cover_line(toks, line, out.n);
        } else if (toks[0] == "k") {
            if (toks.size() != 2 || k)
                throw ParseError(line, "expected a single 'k <k>' line");
            k = static_cast<std::size_t>(detail::parse_nonnegative(toks[1], line));
        } else if (toks[0] == "l") {
            if (toks.size() != 2 || ell)
                throw ParseError(line, "expected a single 'l <length>' line");
            const std::string digits(toks[1]);
            if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
                throw ParseError(line, "sequence length must be a decimal integer");
            ell = BigInt(digits);
            if (*ell < 1)
                throw ParseError(line, "sequence length must be at least 1");
        } else if (toks[0] == "pair") {
            if (toks.size() != 3)
                throw ParseError(line, "expected 'pair <u> <v>'");
            long long u = detail::parse_int(toks[1], line);
            long long v = detail::parse_int(toks[2], line);
            if (u < 1 || v < 1 || u > static_cast<long long>(out.n) || v > static_cast<long long>(out.n))
                throw ParseError(line, "pair vertex out of range 1.." + std::to_string(out.n));
            if (u == v)
                throw ParseError(line, "pair needs two distinct vertices");
            if (u > v)
                std::swap(u, v);
            const std::size_t slot = static_cast<std::size_t>(u - 1) * out.n + static_cast<std::size_t>(v - 1);
            if (seen_pair[slot])
                throw ParseError(line, "duplicate block for pair " + std::to_string(u) + " " + std::to_string(v));
            seen_pair[slot] = 1;
            const std::size_t block_start = line;
            std::string body;
            bool closed = false;
            while (std::getline(in, raw)) {
                ++line;
                auto inner = detail::split_tokens(raw);
                if (inner.size() == 1 && inner[0] == "end") {
                    closed = true;
                    break;
                }
                body += raw + "\n";
            }
            if (!closed)
                throw ParseError(block_start, "pair block without 'end'");
            out.spec.set(static_cast<std::size_t>(u - 1), static_cast<std::size_t>(v - 1),
                         parse_dimacs(body, block_start));
        } else {
            throw ParseError(line, "unknown line type '" + std::string(toks[0]) + "'");
        }
    }
    if (!have_header)
        throw ParseError(line == 0 ? 1 : line, "missing header 'p dvcr <n>'");
    if (!s || !t || !k || !ell)
        throw ParseError(line, "bundle needs 's', 't', 'k' and 'l' lines");
    out.s = std::move(*s);
    out.t = std::move(*t);
    out.k = *k;
    out.ell = std::move(*ell);
    return out;
}

inline DvcrInstance parse_dvcr_bundle(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_dvcr_bundle(in);
}

/// Canonical form: header, s, t, k, l, then every pair whose CNF is not the
/// trivial-no instance, ascending.
inline std::string serialize_dvcr_bundle(const DvcrInstance& inst) {
    std::string out = "p dvcr " + std::to_string(inst.n) + "\n";
    out += detail::cover_line('s', inst.s);
    out += detail::cover_line('t', inst.t);
    out += "k " + std::to_string(inst.k) + "\n";
    out += "l " + inst.ell.str() + "\n";
    const CnfFormula no = make_trivial_cnf(false);
    for (auto [u, v] : inst.spec.pairs()) {
        const CnfFormula& cnf = inst.spec.at(u, v);
        if (cnf == no)
            continue;
        out += "pair " + std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
        out += write_dimacs(cnf);
        out += "end\n";
    }
    return out;
}

} // namespace oraclekit
