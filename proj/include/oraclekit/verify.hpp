#pragma once

// Brute-force equivalence suites shared by `oraclekit verify` and the
// acceptance runner. Each suite draws its corpus from a base seed.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oraclekit/cliquedel.hpp"
#include "oraclekit/discovery.hpp"
#include "oraclekit/generators.hpp"
#include "oraclekit/oracle.hpp"
#include "oraclekit/qsat.hpp"

namespace oraclekit {

enum class SuiteStatus { Pass, Fail, Skip };

struct SuiteResult {
    std::string name;
    SuiteStatus status = SuiteStatus::Pass;
    std::size_t trials = 0;
    std::string detail;  // corpus summary, or the first failure
    double seconds = 0;

    bool ok() const { return status != SuiteStatus::Fail; }
};

inline constexpr std::uint64_t kDefaultSuiteSeed = 20240601;

namespace detail {

class SuiteRun {
public:
    explicit SuiteRun(std::string name) : start_(std::chrono::steady_clock::now()) { result_.name = std::move(name); }

    // Records the first failure only; later ones add nothing to the diagnosis.
    bool check(bool condition, const std::string& what) {
        if (!condition && result_.status != SuiteStatus::Fail) {
            result_.status = SuiteStatus::Fail;
            result_.detail = what;
        }
        return condition;
    }
    bool failed() const { return result_.status == SuiteStatus::Fail; }
    void trial() { ++result_.trials; }

    SuiteResult finish(std::string summary) {
        result_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (!failed())
            result_.detail = std::move(summary);
        return result_;
    }
    SuiteResult skip(std::string why) {
        result_.status = SuiteStatus::Skip;
        result_.detail = std::move(why);
        return finish(result_.detail);
    }

private:
    SuiteResult result_;
    std::chrono::steady_clock::time_point start_;
};

inline std::string seed_note(std::uint64_t base, std::size_t trial) {
    return " (base seed " + std::to_string(base) + ", trial " + std::to_string(trial) + ")";
}

} // namespace detail

/// The shared QSAT corpus: |X| <= 3, |Y| <= 6, at most 8 terms of length 1..4.
inline QDnfInstance qsat_corpus_instance(std::uint64_t base, std::size_t trial) {
    Rng rng(Rng::derive(base, trial));
    const auto n1 = static_cast<std::size_t>(rng.between(0, 3));
    const auto n2 = static_cast<std::size_t>(rng.between(0, 6));
    const auto terms = static_cast<std::size_t>(rng.between(0, 8));
    const auto len = static_cast<std::size_t>(rng.between(1, 4));
    if (n1 + n2 == 0)
        return gen_random_qdnf(0, 0, 0, 0, rng.next());
    return gen_random_qdnf(n1, n2, terms, len, rng.next());
}

inline SuiteResult verify_qsat_kernel(const OracleBackend& backend, std::uint64_t base = kDefaultSuiteSeed,
                                      std::size_t count = 200) {
    detail::SuiteRun run("qsat-kernel");
    std::size_t yes = 0;
    for (std::size_t i = 0; i < count && !run.failed(); ++i) {
        run.trial();
        const QDnfInstance in = qsat_corpus_instance(base, i);
        OracleLedger ledger;
        const QDnfInstance out = kernelize_qdnf(in, backend, ledger);
        const bool expected = decide_qdnf_bruteforce(in);
        yes += expected ? 1 : 0;
        run.check(decide_qdnf_bruteforce(out) == expected, "kernel changed the answer" + detail::seed_note(base, i));
        run.check(ledger.count() == 1 && ledger.count(kPhaseQsatKernel) == 1,
                  "kernel used " + std::to_string(ledger.count()) + " queries" + detail::seed_note(base, i));
        run.check(out == trivial_yes_qdnf() || split_existential(out).phi1_size <= split_existential(in).phi1_size,
                  "kernel grew the existential subformula" + detail::seed_note(base, i));
    }
    return run.finish(std::to_string(count) + " instances, " + std::to_string(yes) + " yes, 1 query each");
}

inline SuiteResult verify_qsat_fptnp(const OracleBackend& backend, std::uint64_t base = kDefaultSuiteSeed,
                                     std::size_t count = 200) {
    detail::SuiteRun run("qsat-fptnp");
    std::size_t queries = 0;
    for (std::size_t i = 0; i < count && !run.failed(); ++i) {
        run.trial();
        const QDnfInstance in = qsat_corpus_instance(base, i);
        OracleLedger ledger;
        const bool got = decide_qdnf_fptnp(in, backend, ledger);
        queries += ledger.count();
        run.check(got == decide_qdnf_bruteforce(in), "solver disagrees with brute force" + detail::seed_note(base, i));
        const std::size_t budget = std::size_t{1} << in.existential().size();
        run.check(ledger.count(kPhaseFptnp) == ledger.count() && ledger.count() <= budget,
                  std::to_string(ledger.count()) + " queries exceed 2^|X| = " + std::to_string(budget) +
                      detail::seed_note(base, i));
    }
    return run.finish(std::to_string(count) + " instances, " + std::to_string(queries) + " queries in total");
}

/// Four-way OR example: four instances with one existential (x1) and one universal (x2) variable each.
inline std::vector<QDnfInstance> or4_example_inputs() {
    return {{DnfFormula::from_ints({{1, 2}, {1, -2}}), {1}, {2}},
            {DnfFormula::from_ints({{-1, 2}, {2}}), {1}, {2}},
            {DnfFormula::from_ints({{1, -2}, {-1, 2}}), {1}, {2}},
            {DnfFormula::from_ints({{-1}, {2}}, 2), {1}, {2}}};
}

/// Their composition under the zero-based selector convention.
inline constexpr std::string_view kOr4ExampleComposed = "p qdnf 4 8\n"
                                                  "e 1 3 4 0\n"
                                                  "a 2 0\n"
                                                  "1 2 -3 -4 0\n"
                                                  "1 -2 -3 -4 0\n"
                                                  "-1 2 3 -4 0\n"
                                                  "2 3 -4 0\n"
                                                  "1 -2 -3 4 0\n"
                                                  "-1 2 -3 4 0\n"
                                                  "-1 3 4 0\n"
                                                  "2 3 4 0\n";

inline SuiteResult verify_qsat_compose(std::uint64_t base = kDefaultSuiteSeed, std::size_t trials_per_width = 50) {
    detail::SuiteRun run("qsat-compose");
    const auto example = or4_example_inputs();
    run.check(serialize_qdnf(compose_qdnf_or(example)) == kOr4ExampleComposed, "four-way example composition differs from the fixture");
    std::size_t yes = 0, trial = 0;
    for (std::size_t t : {2, 4, 8}) {
        for (std::size_t i = 0; i < trials_per_width && !run.failed(); ++i, ++trial) {
            run.trial();
            Rng rng(Rng::derive(base, trial));
            const auto n1 = static_cast<std::size_t>(rng.between(0, 2));
            const auto n2 = static_cast<std::size_t>(rng.between(n1 == 0 ? 1 : 0, 3));
            std::vector<QDnfInstance> inputs;
            bool any = false;
            for (std::size_t j = 0; j < t; ++j) {
                const auto terms = static_cast<std::size_t>(rng.between(1, 5));
                const auto len = static_cast<std::size_t>(rng.between(1, 3));
                inputs.push_back(gen_random_qdnf(n1, n2, terms, len, rng.next()));
                any = any || decide_qdnf_bruteforce(inputs.back());
            }
            const QDnfInstance out = compose_qdnf_or(inputs);
            yes += any ? 1 : 0;
            run.check(decide_qdnf_bruteforce(out) == any, "OR-law violated for t=" + std::to_string(t) +
                                                              detail::seed_note(base, trial));
            const std::size_t padded = std::max<std::size_t>(2, std::bit_ceil(t));
            const auto expected_vars = n1 + n2 + static_cast<std::size_t>(std::countr_zero(padded));
            run.check(out.formula().variable_count() == expected_vars &&
                          out.existential().size() + out.universal().size() == expected_vars,
                      "composed variable count is not n1 + n2 + log t'" + detail::seed_note(base, trial));
        }
    }
    return run.finish("four-way example byte-exact; " + std::to_string(trial) + " compositions (t = 2, 4, 8), " +
                      std::to_string(yes) + " yes");
}

/// Shared CFVD corpus: n <= 9, k <= 4, h <= 3; odd trials are weighted (weights 1..3).
inline CfvdInstance cfvd_corpus_instance(std::uint64_t base, std::size_t trial) {
    CfvdGenOptions opt;
    opt.weighted = trial % 2 == 1;
    return gen_random_cfvd(Rng::derive(base, trial), opt);
}

inline std::size_t search_tree_budget(Weight h, Weight k) {
    std::size_t total = 0, power = 1;
    for (Weight i = 0; i <= h; ++i, power *= k)
        total += power;
    return total;
}

inline SuiteResult verify_cfvd_search(const OracleBackend& backend, std::uint64_t base = kDefaultSuiteSeed,
                                      std::size_t count = 100) {
    detail::SuiteRun run("cfvd-search");
    std::size_t yes = 0, queries = 0;
    for (std::size_t i = 0; i < count && !run.failed(); ++i) {
        run.trial();
        const CfvdInstance in = cfvd_corpus_instance(base, i);
        OracleLedger ledger;
        const bool got = solve_cfvd_searchtree(in, backend, ledger);
        const bool expected = solve_cfvd_bruteforce(in);
        yes += expected ? 1 : 0;
        queries += ledger.count();
        run.check(got == expected, "search tree disagrees with brute force" + detail::seed_note(base, i));
        run.check(ledger.count() <= search_tree_budget(in.h, in.k),
                  std::to_string(ledger.count()) + " queries exceed the search-tree budget" + detail::seed_note(base, i));
    }
    return run.finish(std::to_string(count) + " graphs, " + std::to_string(yes) + " yes, " + std::to_string(queries) +
                      " queries");
}

inline SuiteResult verify_cfvd_kernel(const OracleBackend& backend, std::uint64_t base = kDefaultSuiteSeed,
                                      std::size_t count = 100) {
    detail::SuiteRun run("cfvd-kernel");
    std::size_t before = 0, after = 0;
    for (std::size_t i = 0; i < count && !run.failed(); ++i) {
        run.trial();
        const CfvdInstance in = cfvd_corpus_instance(base, i);
        OracleLedger ledger;
        const CfvdInstance out = kernelize_cfvd(in, backend, ledger);
        before += in.graph.size();
        after += out.graph.size();
        run.check(solve_cfvd_bruteforce(out) == solve_cfvd_bruteforce(in),
                  "kernel changed the answer" + detail::seed_note(base, i));
        const std::uint64_t cliques = count_k_cliques_bruteforce(in.graph, in.k, in.weighted);
        run.check(out.graph.size() <= in.k * cliques, "kernel keeps more than k * #cliques vertices" +
                                                          detail::seed_note(base, i));
        run.check(ledger.count() == in.graph.size() && ledger.count(kPhaseCfvdKernel) == ledger.count(),
                  "kernel query count differs from n" + detail::seed_note(base, i));
        run.check(out.h == in.h && out.k == in.k, "kernel changed h or k" + detail::seed_note(base, i));
        for (Vertex v = 0; v < out.graph.size() && !run.failed(); ++v) {
            bool member = false;
            detail::enumerate_target_cliques(out.graph, out.k, out.weighted, CliqueSemantics::Exact, {},
                                             [&](const VertexSet& c) {
                                                 member = std::binary_search(c.begin(), c.end(), v);
                                                 return !member;
                                             });
            run.check(member, "surviving vertex lies in no target clique" + detail::seed_note(base, i));
        }
    }
    return run.finish(std::to_string(count) + " graphs, " + std::to_string(before) + " -> " + std::to_string(after) +
                      " vertices in total");
}

inline SuiteResult verify_wcfvd_compose(std::uint64_t base = kDefaultSuiteSeed, std::size_t count = 20) {
    detail::SuiteRun run("wcfvd-compose");
    std::size_t yes = 0;
    for (std::size_t i = 0; i < count && !run.failed(); ++i) {
        run.trial();
        const auto inputs = gen_wcfvd_inputs(4, Rng::derive(base, i));
        bool any = false;
        for (const auto& in : inputs)
            any = any || solve_cfvd_bruteforce(in);
        yes += any ? 1 : 0;
        const CfvdInstance out = compose_wcfvd_or(inputs);
        const std::size_t n = inputs.front().graph.size();
        const Weight log_t = 2;
        run.check(out.h == inputs.front().h + n * log_t && out.k == inputs.front().k + n * log_t,
                  "h* or k* off" + detail::seed_note(base, i));
        run.check(solve_cfvd_by_hitting_set(out) == any, "OR-law violated" + detail::seed_note(base, i));
    }
    return run.finish(std::to_string(count) + " compositions of 4 inputs, " + std::to_string(yes) + " yes");
}

/// Gadget reconfiguration sequence for an unsatisfiable phi, 0-based.
inline std::vector<VertexSet> gadget_sequence() { return {{0, 2}, {0, 1, 2}, {1, 2}, {1, 2, 3}, {1, 3}}; }

inline SuiteResult verify_dvcr_gadget(const OracleBackend& backend) {
    detail::SuiteRun run("dvcr-gadget");
    for (bool sat : {false, true}) {
        run.trial();
        const DvcrInstance inst = gen_dvcr_from_cnf(sat ? CnfFormula::from_ints({{1}}) : CnfFormula::from_ints({{1}, {-1}}));
        OracleLedger ledger;
        const Graph g = discover_graph(inst.spec, backend, ledger);
        run.check(is_minimal_vertex_cover(g, inst.s) && is_minimal_vertex_cover(g, inst.t),
                  "gadget covers are not minimal");
        const ReconfResult r = solve_dvcr_bfs(g, inst.s, inst.t, inst.k, inst.ell);
        if (sat) {
            run.check(!r.answer, "satisfiable phi produced a yes-instance");
        } else {
            run.check(r.answer && r.witness == gadget_sequence(), "unsatisfiable phi did not give the gadget sequence");
        }
    }
    return run.finish("unsat phi -> yes with the 5-cover sequence; sat phi -> no");
}

inline SuiteResult verify_dvcr_kernel(const OracleBackend& backend, std::uint64_t base = kDefaultSuiteSeed,
                                      std::size_t count = 100) {
    detail::SuiteRun run("dvcr-kernel");
    std::size_t yes = 0, largest = 0;
    for (std::size_t i = 0; i < count && !run.failed(); ++i) {
        run.trial();
        const DvcrInstance in = gen_random_dvcr(Rng::derive(base, i));
        OracleLedger ledger;
        const DvcrInstance out = kernelize_dvcr(in, backend, ledger);
        run.check(ledger.count(kPhaseDiscover) == in.n * (in.n - 1) / 2 && ledger.count() == ledger.count(kPhaseDiscover),
                  "discovery query count differs from C(n,2)" + detail::seed_note(base, i));
        // Reference graphs come from truth tables, not from the oracle.
        Graph g_in(in.n), g_out(out.n);
        for (auto [u, v] : in.spec.pairs())
            if (satisfiable_by_enumeration(in.spec.at(u, v)))
                g_in.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
        for (auto [u, v] : out.spec.pairs())
            if (satisfiable_by_enumeration(out.spec.at(u, v)))
                g_out.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
        const bool expected = solve_dvcr_bfs(g_in, in.s, in.t, in.k, in.ell).answer;
        const bool got = solve_dvcr_bfs(g_out, out.s, out.t, out.k, out.ell, kMaxDvcrVertices).answer;
        yes += expected ? 1 : 0;
        largest = std::max(largest, out.n);
        run.check(got == expected, "kernel changed the answer" + detail::seed_note(base, i));
        const std::size_t k = in.k;
        run.check(out.n <= 3 * k * k + 2 * k, "kernel exceeds 3k^2 + 2k vertices" + detail::seed_note(base, i));
    }
    return run.finish(std::to_string(count) + " instances, " + std::to_string(yes) + " yes, largest kernel " +
                      std::to_string(largest) + " vertices");
}

inline SuiteResult verify_discovery_wrap(const OracleBackend& backend, std::uint64_t base = kDefaultSuiteSeed,
                                         std::size_t count = 50) {
    detail::SuiteRun run("discovery-wrap");
    std::size_t yes = 0;
    for (std::size_t i = 0; i < count && !run.failed(); ++i) {
        run.trial();
        Rng rng(Rng::derive(base, i));
        CfvdGenOptions opt;
        opt.weighted = i % 2 == 1;
        const CfvdInstance hidden = gen_random_cfvd(rng.next(), opt);
        CfvdParams params{hidden.h, hidden.k, hidden.weighted, {}};
        if (hidden.weighted)
            for (Vertex v = 0; v < hidden.graph.size(); ++v)
                params.weights.push_back(hidden.graph.weight(v));
        const DiscoveryInstance<CfvdParams> in{gen_hidden_graph_spec(hidden.graph, 6, rng), params};

        OracleLedger ledger;
        const auto out = discovery_kernel_wrap(in, cfvd_base_kernelizer(backend, ledger), backend, ledger);

        auto concrete = [](const DiscoveryInstance<CfvdParams>& d) {
            Graph g(d.spec.rows());
            for (auto [u, v] : d.spec.pairs())
                if (satisfiable_by_enumeration(d.spec.at(u, v)))
                    g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
            return cfvd_from_discovered(g, d.params);
        };
        const bool expected = solve_cfvd_bruteforce(concrete(in));
        yes += expected ? 1 : 0;
        run.check(solve_cfvd_bruteforce(concrete(out)) == expected, "wrapped kernel changed the answer" +
                                                                        detail::seed_note(base, i));
    }
    return run.finish(std::to_string(count) + " discovery instances, " + std::to_string(yes) + " yes");
}

/// Random 3-CNF at ratio 3.5..5 over 5..20 variables: a mix of sat and unsat.
inline CnfFormula crosscheck_cnf(std::uint64_t base, std::size_t trial) {
    Rng rng(Rng::derive(base, trial));
    const auto vars = static_cast<Var>(rng.between(5, 20));
    const auto clauses = static_cast<std::size_t>(vars * (35 + rng.below(16)) / 10);
    return gen_random_cnf(vars, clauses, 3, rng);
}

inline SuiteResult verify_oracle_crosscheck(const std::optional<OracleBackend>& external,
                                            std::uint64_t base = kDefaultSuiteSeed, std::size_t count = 500) {
    detail::SuiteRun run("oracle-crosscheck");
    if (!external)
        return run.skip("ORACLE_SOLVER_CMD is unset; no external backend to compare against");
    const OracleBackend builtin = OracleBackend::builtin();
    std::size_t sat = 0;
    for (std::size_t i = 0; i < count && !run.failed(); ++i) {
        run.trial();
        const CnfFormula cnf = crosscheck_cnf(base, i);
        OracleLedger a, b;
        const bool mine = query_sat(builtin, a, cnf, "crosscheck").satisfiable;
        const bool theirs = query_sat(*external, b, cnf, "crosscheck").satisfiable;
        sat += mine ? 1 : 0;
        run.check(mine == theirs, "builtin and external verdicts differ" + detail::seed_note(base, i));
    }
    return run.finish(std::to_string(count) + " CNFs, " + std::to_string(sat) + " satisfiable");
}

struct SuiteEntry {
    std::string name;
    std::function<SuiteResult(const OracleBackend&, std::uint64_t)> run;
};

/// Every suite, in acceptance order. The cross-check compares the given
/// backend with the one named by ORACLE_SOLVER_CMD.
inline std::vector<SuiteEntry> all_suites() {
    return {
        {"qsat-kernel", [](const OracleBackend& b, std::uint64_t s) { return verify_qsat_kernel(b, s); }},
        {"qsat-fptnp", [](const OracleBackend& b, std::uint64_t s) { return verify_qsat_fptnp(b, s); }},
        {"qsat-compose", [](const OracleBackend&, std::uint64_t s) { return verify_qsat_compose(s); }},
        {"cfvd-search", [](const OracleBackend& b, std::uint64_t s) { return verify_cfvd_search(b, s); }},
        {"cfvd-kernel", [](const OracleBackend& b, std::uint64_t s) { return verify_cfvd_kernel(b, s); }},
        {"wcfvd-compose", [](const OracleBackend&, std::uint64_t s) { return verify_wcfvd_compose(s); }},
        {"dvcr-gadget", [](const OracleBackend& b, std::uint64_t) { return verify_dvcr_gadget(b); }},
        {"dvcr-kernel", [](const OracleBackend& b, std::uint64_t s) { return verify_dvcr_kernel(b, s); }},
        {"discovery-wrap", [](const OracleBackend& b, std::uint64_t s) { return verify_discovery_wrap(b, s); }},
        {"oracle-crosscheck",
         [](const OracleBackend&, std::uint64_t s) { return verify_oracle_crosscheck(OracleBackend::from_environment(), s); }},
    };
}

} // namespace oraclekit
