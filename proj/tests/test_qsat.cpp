#include <gtest/gtest.h>

#include <algorithm>

#include "oraclekit/qsat.hpp"
#include "oraclekit/verify.hpp"
#include "support/oracles.hpp"

using namespace oraclekit;

namespace {

const OracleBackend kBuiltin = OracleBackend::builtin();

// Variables 1, 2 are x1, x2; 3..6 are y1..y4.
QDnfInstance worked_example() {
    return {DnfFormula::from_ints({{1, -2, 3}, {-3, 4}, {5, -6}}), {1, 2}, {3, 4, 5, 6}};
}

std::vector<LiteralList> sorted_terms(std::vector<LiteralList> terms) {
    std::sort(terms.begin(), terms.end());
    return terms;
}

} // namespace

TEST(BruteForce, Examples) {
    // No X-assignment makes φ valid: every choice leaves a Y-assignment falsifying all terms.
    EXPECT_FALSE(decide_qdnf_bruteforce(worked_example()));
    EXPECT_FALSE(oracles::qdnf_true(worked_example()));
    EXPECT_TRUE(decide_qdnf_bruteforce(trivial_yes_qdnf()));
    EXPECT_TRUE(decide_qdnf_bruteforce({DnfFormula::from_ints({{1}, {-1}}), {}, {1}}));
    EXPECT_FALSE(decide_qdnf_bruteforce({DnfFormula({}, 0), {}, {}}));
    EXPECT_TRUE(decide_qdnf_bruteforce({DnfFormula::constant_true(0), {}, {}}));
}

TEST(BruteForce, GuardIsEnforced) {
    const auto q = gen_random_qdnf(3, 10, 4, 3, 1);
    EXPECT_THROW(decide_qdnf_bruteforce(q, 12), GuardExceeded);
    EXPECT_NO_THROW(decide_qdnf_bruteforce(q, 13));
}

TEST(BruteForce, AgreesWithReferenceEnumeration) {
    for (std::size_t i = 0; i < 300; ++i) {
        const auto q = qsat_corpus_instance(7, i);
        ASSERT_EQ(decide_qdnf_bruteforce(q), oracles::qdnf_true(q)) << serialize_qdnf(q);
    }
}

TEST(Fptnp, WorkedExampleUsesFourQueries) {
    OracleLedger ledger;
    EXPECT_FALSE(decide_qdnf_fptnp(worked_example(), kBuiltin, ledger));
    EXPECT_EQ(ledger.count(kPhaseFptnp), 4U);
}

TEST(Fptnp, NoExistentialVariablesIsOneTautologyQuery) {
    OracleLedger ledger;
    EXPECT_TRUE(decide_qdnf_fptnp({DnfFormula::from_ints({{1}, {-1}}), {}, {1}}, kBuiltin, ledger));
    EXPECT_EQ(ledger.count(), 1U);
}

TEST(Fptnp, EnumerationOrderFixesQueryCount) {
    // x1 = false is tried first and fails, x1 = true succeeds: two queries.
    OracleLedger ledger;
    EXPECT_TRUE(decide_qdnf_fptnp(trivial_yes_qdnf(), kBuiltin, ledger));
    EXPECT_EQ(ledger.count(), 2U);
    // With ¬x1 the first assignment already succeeds.
    OracleLedger ledger2;
    EXPECT_TRUE(decide_qdnf_fptnp({DnfFormula::from_ints({{-1}}), {1}, {}}, kBuiltin, ledger2));
    EXPECT_EQ(ledger2.count(), 1U);
}

TEST(Fptnp, AgreesAndStaysWithinBudget) {
    for (std::size_t i = 0; i < 300; ++i) {
        const auto q = qsat_corpus_instance(99, i);
        OracleLedger ledger;
        ASSERT_EQ(decide_qdnf_fptnp(q, kBuiltin, ledger), oracles::qdnf_true(q));
        ASSERT_LE(ledger.count(), std::size_t{1} << q.existential().size());
    }
}

TEST(Split, WorkedExample) {
    const auto split = split_existential(worked_example());
    EXPECT_EQ(split.phi1.formula().terms(), DnfFormula::from_ints({{1, -2, 3}, {-3, 4}}).terms());
    EXPECT_EQ(split.phi2.terms(), DnfFormula::from_ints({{5, -6}}).terms());
    EXPECT_EQ(split.phi1_size, 5U);
    EXPECT_EQ(split.phi1.existential(), (std::vector<Var>{1, 2}));
    EXPECT_EQ(split.phi1.universal(), (std::vector<Var>{3, 4}));
}

TEST(Split, DegenerateCases) {
    const auto all_universal = split_existential({DnfFormula::from_ints({{1, 2}, {-2}}), {}, {1, 2}});
    EXPECT_TRUE(all_universal.phi1.formula().empty());
    EXPECT_EQ(all_universal.phi1_size, 0U);
    EXPECT_EQ(all_universal.phi2.terms().size(), 2U);

    const auto single = split_existential(trivial_yes_qdnf());
    EXPECT_EQ(single.phi1.formula().terms(), DnfFormula::from_ints({{1}}).terms());
    EXPECT_TRUE(single.phi2.empty());
}

TEST(Split, PartitionProperties) {
    for (std::size_t i = 0; i < 300; ++i) {
        const auto q = qsat_corpus_instance(3, i);
        const auto split = split_existential(q);
        std::vector<LiteralList> joined = split.phi1.formula().terms();
        joined.insert(joined.end(), split.phi2.terms().begin(), split.phi2.terms().end());
        ASSERT_EQ(sorted_terms(joined), sorted_terms(q.formula().terms()));
        const auto v1 = split.phi1.formula().variables();
        for (Var v : split.phi2.variables()) {
            ASSERT_FALSE(std::binary_search(v1.begin(), v1.end(), v));
            ASSERT_TRUE(q.is_universal(v));
        }
        std::size_t size = 0;
        for (const auto& t : split.phi1.formula().terms())
            size += t.size();
        ASSERT_EQ(size, split.phi1_size);
        // ∃X∀Y(φ1 ∨ φ2) = taut(φ2) ∨ ∃X∀Y φ1
        const bool taut = oracles::dnf_tautology(split.phi2);
        ASSERT_EQ(oracles::qdnf_true(q), taut || oracles::qdnf_true(split.phi1));
    }
}

TEST(Kernel, WorkedExampleKeepsPhi1) {
    OracleLedger ledger;
    const auto k = kernelize_qdnf(worked_example(), kBuiltin, ledger);
    EXPECT_EQ(ledger.count(kPhaseQsatKernel), 1U);
    EXPECT_EQ(k.formula().terms(), DnfFormula::from_ints({{1, -2, 3}, {-3, 4}}).terms());
    EXPECT_EQ(k.existential(), (std::vector<Var>{1, 2}));
    EXPECT_EQ(k.universal(), (std::vector<Var>{3, 4}));
    EXPECT_EQ(k.formula().variable_count(), 4U);
}

TEST(Kernel, TautologicalRemainderGivesTrivialYes) {
    OracleLedger ledger;
    EXPECT_EQ(kernelize_qdnf({DnfFormula::from_ints({{1}, {-1}}), {}, {1}}, kBuiltin, ledger), trivial_yes_qdnf());
    EXPECT_EQ(ledger.count(), 1U);
}

TEST(Kernel, PreservesAnswers) {
    std::size_t yes = 0;
    for (std::size_t i = 0; i < 300; ++i) {
        const auto q = qsat_corpus_instance(12, i);
        OracleLedger ledger;
        const auto k = kernelize_qdnf(q, kBuiltin, ledger);
        const bool expected = oracles::qdnf_true(q);
        yes += expected ? 1 : 0;
        ASSERT_EQ(oracles::qdnf_true(k), expected);
        ASSERT_EQ(ledger.count(), 1U);
        if (k != trivial_yes_qdnf()) {
            ASSERT_LE(split_existential(k).phi1_size, split_existential(q).phi1_size);
        }
    }
    EXPECT_GT(yes, 30U);
    EXPECT_LT(yes, 270U);
}

TEST(Compose, FourWayFixture) {
    const auto out = compose_qdnf_or(or4_example_inputs());
    EXPECT_EQ(serialize_qdnf(out), kOr4ExampleComposed);
    EXPECT_EQ(out.formula().variable_count(), 4U);
}

TEST(Compose, SingleInstanceIsPaddedToTwo) {
    const QDnfInstance in({DnfFormula::from_ints({{1, 2}, {1, -2}}), {1}, {2}});
    const auto out = compose_qdnf_or(std::vector<QDnfInstance>{in});
    EXPECT_EQ(out.formula().variable_count(), 3U);
    EXPECT_EQ(out.formula().terms().size(), 4U);
    EXPECT_EQ(oracles::qdnf_true(out), oracles::qdnf_true(in));
}

TEST(Compose, OrLawOnTinyInstances) {
    for (std::size_t t = 1; t <= 8; ++t) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed * 31 + t);
            const std::size_t n1 = rng.below(3), n2 = 1 + rng.below(3);
            std::vector<QDnfInstance> inputs;
            bool any = false;
            for (std::size_t i = 0; i < t; ++i) {
                inputs.push_back(gen_random_qdnf(n1, n2, 1 + rng.below(4), 1 + rng.below(3), rng.next()));
                any = any || oracles::qdnf_true(inputs.back());
            }
            const auto out = compose_qdnf_or(inputs);
            ASSERT_EQ(oracles::qdnf_true(out), any);
            const std::size_t padded = std::max<std::size_t>(2, std::bit_ceil(t));
            ASSERT_EQ(out.formula().variable_count(), n1 + n2 + std::countr_zero(padded));
        }
    }
}

TEST(Compose, RejectsMismatchedShapes) {
    const std::vector<QDnfInstance> inputs{trivial_yes_qdnf(), {DnfFormula::from_ints({{1, 2}}), {1, 2}, {}}};
    EXPECT_THROW(compose_qdnf_or(inputs), InvalidInstance);
    EXPECT_THROW(compose_qdnf_or(std::vector<QDnfInstance>{}), InvalidInstance);
}

TEST(Compose, PositionalIdentificationOfVariables) {
    // Different variable names, same shape: x = 3, y = 1 in the second input.
    const std::vector<QDnfInstance> inputs{{DnfFormula::from_ints({{1, -2}}), {1}, {2}},
                                           {DnfFormula::from_ints({{3, 1}}), {3}, {1}}};
    EXPECT_EQ(serialize_qdnf(compose_qdnf_or(inputs)), "p qdnf 3 2\ne 1 3 0\na 2 0\n1 -2 -3 0\n1 2 3 0\n");
}

TEST(Generator, DeterministicAndDegenerate) {
    EXPECT_EQ(gen_random_qdnf(2, 3, 4, 3, 1), gen_random_qdnf(2, 3, 4, 3, 1));
    const auto q = gen_random_qdnf(0, 3, 2, 2, 7);
    EXPECT_TRUE(q.existential().empty());
    EXPECT_EQ(parse_qdnf(serialize_qdnf(q)), q);
}
