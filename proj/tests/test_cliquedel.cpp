#include <gtest/gtest.h>

#include "oraclekit/cliquedel.hpp"
#include "oraclekit/generators.hpp"
#include "oraclekit/verify.hpp"
#include "support/oracles.hpp"

using namespace oraclekit;

namespace {

const OracleBackend kBuiltin = OracleBackend::builtin();

Graph path(std::size_t n) {
    Graph g(n);
    for (Vertex v = 0; v + 1 < n; ++v)
        g.add_edge(v, v + 1);
    return g;
}

Graph petersen() {
    Graph g(10);
    for (Vertex i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(i + 5, (i + 2) % 5 + 5);
    }
    return g;
}

bool search(const CfvdInstance& inst, std::size_t* queries = nullptr) {
    OracleLedger ledger;
    const bool out = solve_cfvd_searchtree(inst, kBuiltin, ledger);
    if (queries)
        *queries = ledger.count(kPhaseCfvdSearch);
    return out;
}

} // namespace

TEST(CliqueCount, SmallGraphs) {
    EXPECT_EQ(count_k_cliques_bruteforce(complete_graph(4), 3, false), 4U);
    EXPECT_EQ(count_k_cliques_bruteforce(complete_graph(4), 5, false), 0U);
    EXPECT_EQ(count_k_cliques_bruteforce(complete_graph(5), 2, false), 10U);
    EXPECT_EQ(count_k_cliques_bruteforce(petersen(), 3, false), 0U);
    EXPECT_EQ(count_k_cliques_bruteforce(petersen(), 2, false), 15U);
    EXPECT_EQ(count_k_cliques_bruteforce(path(4), 1, false), 4U);
    EXPECT_THROW(count_k_cliques_bruteforce(complete_graph(13), 2, false), GuardExceeded);
}

TEST(CliqueCount, WeightedMeansExactWeight) {
    Graph g = complete_graph(3);
    g.set_weight(0, 2);
    // Weight-3 cliques: {0,1}, {0,2}; {1,2} weighs 2 and {0,1,2} weighs 4.
    EXPECT_EQ(count_k_cliques_bruteforce(g, 3, true), 2U);
    EXPECT_EQ(count_k_cliques_bruteforce(g, 4, true), 1U);
}

TEST(CliqueCount, AgreesWithEnumerationOracle) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        CfvdGenOptions opt;
        opt.weighted = seed % 2 == 1;
        const auto inst = gen_random_cfvd(seed, opt);
        ASSERT_EQ(count_k_cliques_bruteforce(inst.graph, inst.k, inst.weighted),
                  oracles::count_cliques(inst.graph, inst.k, inst.weighted));
    }
}

TEST(CliqueOracle, FindsValidatedCliques) {
    OracleLedger ledger;
    const auto tri = find_clique_via_oracle(complete_graph(4), 3, false, kBuiltin, ledger);
    ASSERT_TRUE(tri);
    EXPECT_EQ(tri->size(), 3U);
    EXPECT_FALSE(find_clique_via_oracle(petersen(), 3, false, kBuiltin, ledger));
    const auto with2 = find_clique_via_oracle(complete_graph(4), 2, false, kBuiltin, ledger, Vertex{2});
    ASSERT_TRUE(with2);
    EXPECT_TRUE(std::binary_search(with2->begin(), with2->end(), Vertex{2}));
    EXPECT_TRUE(find_clique_via_oracle(path(3), 2, false, kBuiltin, ledger, Vertex{0}));
    EXPECT_FALSE(find_clique_via_oracle(Graph(3), 2, false, kBuiltin, ledger, Vertex{1}));
    EXPECT_EQ(ledger.count("clique"), 5U);
    EXPECT_THROW(find_clique_via_oracle(Graph(3), 2, false, kBuiltin, ledger, Vertex{3}), InvalidInstance);
    EXPECT_THROW(find_clique_via_oracle(Graph(3), 0, false, kBuiltin, ledger), InvalidInstance);
}

TEST(CliqueOracle, EncodingMatchesEnumeration) {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        CfvdGenOptions opt;
        opt.weighted = seed % 3 == 0;
        const auto inst = gen_random_cfvd(seed + 500, opt);
        for (Vertex v = 0; v < inst.graph.size(); ++v) {
            bool expected = false;
            for (auto mask : oracles::target_clique_masks(inst.graph, inst.k, inst.weighted))
                expected = expected || ((mask >> v) & 1U);
            OracleLedger ledger;
            ASSERT_EQ(find_clique_via_oracle(inst.graph, inst.k, inst.weighted, kBuiltin, ledger, v).has_value(),
                      expected);
        }
    }
}

TEST(CliqueOracle, RejectsLyingSolver) {
    // Reports "satisfiable" with all selection variables false.
    const auto liar = OracleBackend::external("sh -c 'echo s SATISFIABLE; echo v -1 -2 -3 0' x");
    OracleLedger ledger;
    EXPECT_THROW(find_clique_via_oracle(Graph(3), 1, false, liar, ledger), IntegrityError);
}

TEST(SearchTree, Examples) {
    EXPECT_TRUE(search({complete_graph(3), 1, 3, false}));
    EXPECT_FALSE(search({complete_graph(3), 0, 3, false}));
    EXPECT_TRUE(search({path(3), 1, 2, false}));
    EXPECT_FALSE(search({path(4), 1, 2, false}));
    EXPECT_TRUE(search({petersen(), 0, 3, false}));
    // K4 has four triangles; one deletion leaves K3, two leave an edge.
    EXPECT_FALSE(search({complete_graph(4), 1, 3, false}));
    EXPECT_TRUE(search({complete_graph(4), 2, 3, false}));
    // k = 1 asks to delete every vertex.
    EXPECT_TRUE(search({path(3), 3, 1, false}));
    EXPECT_FALSE(search({path(3), 2, 1, false}));
}

TEST(SearchTree, EmptyInstanceIsOneQuery) {
    std::size_t queries = 0;
    EXPECT_TRUE(search({Graph(0), 0, 1, false}, &queries));
    EXPECT_EQ(queries, 1U);
}

TEST(SearchTree, WeightedBudget) {
    Graph g = complete_graph(3);
    g.set_weight(0, 3);
    g.set_weight(1, 3);
    // Weight-2 clique is {2} only when w2 = 2.
    g.set_weight(2, 2);
    EXPECT_TRUE(search({g, 2, 2, true}));
    EXPECT_FALSE(search({g, 1, 2, true}));
    // Weight-5 cliques {0,2}, {1,2}: deleting vertex 2 (weight 2) hits both.
    EXPECT_TRUE(search({g, 2, 5, true}));
    EXPECT_THROW(search({g, 2, 5, false}), InvalidInstance);
}

TEST(SearchTree, AgreesWithOracleAndQueryBound) {
    std::size_t yes = 0;
    for (std::size_t i = 0; i < 300; ++i) {
        const auto inst = cfvd_corpus_instance(77, i);
        std::size_t queries = 0;
        const bool got = search(inst, &queries);
        ASSERT_EQ(got, oracles::cfvd_yes(inst)) << serialize_graph({inst.graph, inst.weighted, {{inst.h, inst.k}}});
        ASSERT_LE(queries, search_tree_budget(inst.h, inst.k));
        yes += got ? 1 : 0;
    }
    EXPECT_GT(yes, 30U);
    EXPECT_LT(yes, 270U);
}

TEST(BruteForceCfvd, AgreesWithOracleInBothSemantics) {
    for (std::size_t i = 0; i < 300; ++i) {
        const auto inst = cfvd_corpus_instance(5, i);
        ASSERT_EQ(solve_cfvd_bruteforce(inst), oracles::cfvd_yes(inst));
        ASSERT_EQ(solve_cfvd_bruteforce(inst, kDefaultCfvdGuard, CliqueSemantics::AtLeast),
                  oracles::cfvd_yes(inst, true));
    }
}

TEST(BruteForceCfvd, SemanticsDifferOnWeightedOvershoot) {
    // One vertex of weight 3 and k = 2: no clique weighs exactly 2, but {0} weighs at least 2.
    Graph g(1);
    g.set_weight(0, 3);
    const CfvdInstance inst{g, 0, 2, true};
    EXPECT_TRUE(solve_cfvd_bruteforce(inst));
    EXPECT_FALSE(solve_cfvd_bruteforce(inst, kDefaultCfvdGuard, CliqueSemantics::AtLeast));
}

TEST(HittingSet, AgreesWithSubsetEnumeration) {
    for (std::size_t i = 0; i < 400; ++i) {
        const auto inst = cfvd_corpus_instance(909, i);
        ASSERT_EQ(solve_cfvd_by_hitting_set(inst), solve_cfvd_bruteforce(inst));
        ASSERT_EQ(solve_cfvd_by_hitting_set(inst, 1'000'000, CliqueSemantics::AtLeast),
                  oracles::cfvd_yes(inst, true));
    }
}

TEST(HittingSet, LargerGraphsAgainstSearchTree) {
    Rng rng(42);
    for (int i = 0; i < 40; ++i) {
        const CfvdInstance inst{gen_random_graph(14 + rng.below(5), 0.5, rng), rng.below(4), 2 + rng.below(3), false};
        ASSERT_EQ(solve_cfvd_by_hitting_set(inst), search(inst));
    }
}

TEST(HittingSet, CliqueGuard) {
    EXPECT_THROW(solve_cfvd_by_hitting_set({complete_graph(8), 2, 4, false}, 10), GuardExceeded);
}

TEST(Kernel, DropsVerticesOutsideTargetCliques) {
    Graph g(5); // triangle 0-1-2, pendant edge 2-3, isolated 4
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(0, 2);
    g.add_edge(2, 3);
    OracleLedger ledger;
    const auto k = kernelize_cfvd({g, 1, 3, false}, kBuiltin, ledger);
    EXPECT_EQ(ledger.count(kPhaseCfvdKernel), 5U);
    EXPECT_EQ(k.graph, complete_graph(3));
    EXPECT_EQ(k.h, 1U);
    EXPECT_EQ(k.k, 3U);

    OracleLedger ledger2;
    EXPECT_EQ(kernelize_cfvd({petersen(), 0, 3, false}, kBuiltin, ledger2).graph.size(), 0U);
}

TEST(Kernel, PreservesAnswersAndWeights) {
    for (std::size_t i = 0; i < 300; ++i) {
        const auto inst = cfvd_corpus_instance(31, i);
        OracleLedger ledger;
        const auto k = kernelize_cfvd(inst, kBuiltin, ledger);
        ASSERT_EQ(ledger.count(), inst.graph.size());
        ASSERT_LE(k.graph.size(), inst.graph.size());
        ASSERT_EQ(oracles::cfvd_yes(k), oracles::cfvd_yes(inst));
        ASSERT_EQ(oracles::count_cliques(k.graph, k.k, k.weighted),
                  oracles::count_cliques(inst.graph, inst.k, inst.weighted));
    }
}

TEST(Kernel, BudgetShortCircuit) {
    // Two disjoint triangles, h = 2: one deletion per triangle suffices.
    Graph g(6);
    for (Vertex b : {0U, 3U}) {
        g.add_edge(b, b + 1);
        g.add_edge(b + 1, b + 2);
        g.add_edge(b, b + 2);
    }
    const auto yes = budget_short_circuit({g, 2, 3, false});
    ASSERT_TRUE(yes);
    EXPECT_EQ(yes->graph.size(), 0U);
    EXPECT_TRUE(oracles::cfvd_yes(*yes));
    EXPECT_FALSE(budget_short_circuit({g, 1, 3, false}));
}

TEST(Composition, ShapeArithmetic) {
    const auto s = wcfvd_composition_shape(4, 3, 1, 2);
    EXPECT_EQ(s.padded_count, 4U);
    EXPECT_EQ(s.selector_bits, 2U);
    EXPECT_EQ(s.h_star, 7U);
    EXPECT_EQ(s.k_star, 8U);
    EXPECT_EQ(s.selector_weight, 3U);
    EXPECT_EQ(s.dummy_weight, 2U);
    EXPECT_EQ(s.dummies_per_bit, 8U);
    EXPECT_EQ(wcfvd_composition_shape(2, 3, 1, 2).padded_count, 4U);
    EXPECT_EQ(wcfvd_composition_shape(5, 3, 1, 2).padded_count, 8U);
    EXPECT_EQ(wcfvd_composition_shape(5, 3, 1, 2).dummy_weight, 5U);
}

TEST(Composition, Layout) {
    std::vector<CfvdInstance> in(4, CfvdInstance{path(3), 1, 2, false});
    const auto out = compose_wcfvd_or(in);
    // 12 graph vertices, 4 selectors, 2 * 8 dummies.
    ASSERT_EQ(out.graph.size(), 32U);
    EXPECT_TRUE(out.weighted);
    EXPECT_EQ(out.h, 7U);
    EXPECT_EQ(out.k, 8U);
    for (Vertex v = 12; v < 16; ++v)
        EXPECT_EQ(out.graph.weight(v), 3U);
    for (Vertex v = 16; v < 32; ++v)
        EXPECT_EQ(out.graph.weight(v), 2U);
    // Input 0 (bits 00) attaches to the primed selectors 13 and 15.
    EXPECT_TRUE(out.graph.adjacent(0, 13));
    EXPECT_TRUE(out.graph.adjacent(0, 15));
    EXPECT_FALSE(out.graph.adjacent(0, 12));
    // Input 3 (bits 11) attaches to 12 and 14.
    EXPECT_TRUE(out.graph.adjacent(9, 12));
    EXPECT_TRUE(out.graph.adjacent(9, 14));
    EXPECT_FALSE(out.graph.adjacent(9, 15));
    EXPECT_TRUE(out.graph.is_clique(VertexSet{12, 13, 14, 15}));
    EXPECT_TRUE(out.graph.adjacent(16, 12) && out.graph.adjacent(16, 13) && !out.graph.adjacent(16, 14));
}

TEST(Composition, OrLawSmallPaddedCase) {
    // t = 2 pads to 4 by repeating the first input.
    const CfvdInstance no{complete_graph(3), 1, 2, false}; // three edges, one deletion leaves one
    const CfvdInstance yes{path(3), 1, 2, false};
    EXPECT_FALSE(solve_cfvd_by_hitting_set(compose_wcfvd_or(std::vector<CfvdInstance>{no, no})));
    EXPECT_TRUE(solve_cfvd_by_hitting_set(compose_wcfvd_or(std::vector<CfvdInstance>{no, yes})));
    EXPECT_TRUE(solve_cfvd_by_hitting_set(compose_wcfvd_or(std::vector<CfvdInstance>{yes, no})));
}

TEST(Composition, OrLawOnRandomInputs) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto inputs = gen_wcfvd_inputs(2 + seed % 3, seed * 13 + 1);
        bool any = false;
        for (const auto& in : inputs)
            any = any || oracles::cfvd_yes(in);
        ASSERT_EQ(solve_cfvd_by_hitting_set(compose_wcfvd_or(inputs)), any);
    }
}

TEST(Composition, RejectsBadInputs) {
    EXPECT_THROW(compose_wcfvd_or(std::vector<CfvdInstance>{}), InvalidInstance);
    EXPECT_THROW(compose_wcfvd_or(std::vector<CfvdInstance>{{path(3), 1, 2, false}, {path(4), 1, 2, false}}),
                 InvalidInstance);
    EXPECT_THROW(compose_wcfvd_or(std::vector<CfvdInstance>{{path(3), 3, 2, false}}), InvalidInstance);
    EXPECT_THROW(compose_wcfvd_or(std::vector<CfvdInstance>{{path(3), 0, 2, false}}), InvalidInstance);
    Graph w = path(3);
    w.set_weight(0, 2);
    EXPECT_THROW(compose_wcfvd_or(std::vector<CfvdInstance>{{w, 1, 2, true}}), InvalidInstance);
}

TEST(GraphCodec, RoundTripAndErrors) {
    const std::string text = "p graph 3 2 weighted\nw 2 4\ne 1 2\ne 2 3\nparam 1 5\n";
    const auto doc = parse_graph(text);
    EXPECT_TRUE(doc.weighted);
    EXPECT_EQ(doc.graph.weight(1), 4U);
    EXPECT_EQ(doc.params, (std::pair<Weight, Weight>{1, 5}));
    EXPECT_EQ(serialize_graph(doc), text);
    EXPECT_EQ(parse_graph("c x\np graph 2 0\n").graph.size(), 2U);
    EXPECT_THROW(parse_graph("p graph 2 1\ne 1 1\n"), ParseError);
    EXPECT_THROW(parse_graph("p graph 2 2\ne 1 2\ne 2 1\n"), ParseError);
    EXPECT_THROW(parse_graph("p graph 2 1\ne 1 3\n"), ParseError);
    EXPECT_THROW(parse_graph("p graph 2 0\nw 1 2\n"), ParseError);
    EXPECT_THROW(parse_graph("p graph 2 0\nparam 1 0\n"), ParseError);
    EXPECT_THROW(parse_graph("p graph 2 0\nparam 1 1\ne 1 2\n"), ParseError);
    EXPECT_THROW(parse_graph(""), ParseError);
}
