#include <gtest/gtest.h>

#include "oraclekit/formula.hpp"
#include "oraclekit/qsat.hpp"
#include "support/oracles.hpp"

using namespace oraclekit;

namespace {

const char* kWorkedExample = "p qdnf 6 3\n"
                             "e 1 2 0\n"
                             "a 3 4 5 6 0\n"
                             "1 -2 3 0\n"
                             "-3 4 0\n"
                             "5 -6 0\n";

Assignment bind_all(Var n, std::initializer_list<std::pair<Var, bool>> values) {
    Assignment a(n);
    for (auto [v, b] : values)
        a.bind(v, b);
    return a;
}

std::size_t error_line(const std::string& text) {
    try {
        parse_qdnf(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST(Literal, DimacsRoundTrip) {
    EXPECT_EQ(Literal::from_dimacs(-3), (Literal{3, false}));
    EXPECT_EQ(Literal::from_dimacs(4).dimacs(), 4);
    EXPECT_EQ((~Literal{2, true}), (Literal{2, false}));
}

TEST(DnfFormula, RejectsComplementaryTerm) {
    EXPECT_THROW(DnfFormula::from_ints({{1, -1}}), InvalidInstance);
    EXPECT_THROW(DnfFormula::from_ints({{2, 2}}), InvalidInstance);
    EXPECT_THROW(DnfFormula({{Literal{3, true}}}, 2), InvalidInstance);
}

TEST(ParseQdnf, SmallExample) {
    const auto q = parse_qdnf("p qdnf 3 1\ne 1 2 0\na 3 0\n1 -2 3 0\n");
    EXPECT_EQ(q.existential(), (std::vector<Var>{1, 2}));
    EXPECT_EQ(q.universal(), (std::vector<Var>{3}));
    EXPECT_EQ(q.formula(), DnfFormula::from_ints({{1, -2, 3}}));
}

TEST(ParseQdnf, WorkedExample) {
    const auto q = parse_qdnf(kWorkedExample);
    EXPECT_EQ(q.existential(), (std::vector<Var>{1, 2}));
    EXPECT_EQ(q.universal(), (std::vector<Var>{3, 4, 5, 6}));
    EXPECT_EQ(q.formula().terms().size(), 3U);
}

TEST(ParseQdnf, ErrorsCarryLineNumbers) {
    EXPECT_EQ(error_line("p qdnf 1 0\ne 1 0\na 1 0\n"), 3U);                 // quantified twice
    EXPECT_EQ(error_line("p qdnf 2 1\ne 1 0\na 2 0\nc note\n1 -1 0\n"), 5U);  // complementary literals
    EXPECT_EQ(error_line("p qdnf 2 1\ne 1 0\na 2 0\n3 0\n"), 4U);            // out of range
    EXPECT_EQ(error_line("p qdnf x 1\n"), 1U);                              // malformed header
    EXPECT_EQ(error_line("c only\np dnf 1 1\n"), 2U);
    EXPECT_EQ(error_line("p qdnf 2 1\ne 1 0\n1 2 0\n"), 3U); // 2 unquantified
    EXPECT_EQ(error_line("p qdnf 2 2\ne 1 0\na 2 0\n1 2 0\n"), 4U); // term count
}

TEST(SerializeQdnf, CanonicalTexts) {
    EXPECT_EQ(serialize_qdnf(trivial_yes_qdnf()), "p qdnf 1 1\ne 1 0\na 0\n1 0\n");
    EXPECT_EQ(serialize_qdnf(QDnfInstance(DnfFormula({}, 2), {2}, {1})), "p qdnf 2 0\ne 2 0\na 1 0\n");
    EXPECT_EQ(serialize_qdnf(parse_qdnf(kWorkedExample)), kWorkedExample);
}

TEST(SerializeQdnf, RoundTripOnRandomInstances) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto q = gen_random_qdnf(seed % 4, 1 + seed % 5, seed % 7, 1 + seed % 4, seed);
        const std::string text = serialize_qdnf(q);
        EXPECT_EQ(parse_qdnf(text), q);
        EXPECT_EQ(serialize_qdnf(parse_qdnf(text)), text);
    }
}

TEST(NegateDnf, DeMorganExamples) {
    EXPECT_EQ(negate_dnf_to_cnf(DnfFormula::from_ints({{1, -2}, {3}})), CnfFormula::from_ints({{-1, 2}, {-3}}));
    EXPECT_EQ(negate_dnf_to_cnf(DnfFormula::from_ints({{1}})), CnfFormula::from_ints({{-1}}));
    EXPECT_TRUE(negate_dnf_to_cnf(DnfFormula::constant_false(3)).clauses().empty());
}

TEST(NegateDnf, DualityExhaustive) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto q = gen_random_qdnf(0, 1 + seed % 12, seed % 9, 1 + seed % 4, seed);
        const DnfFormula& dnf = q.formula();
        const CnfFormula cnf = negate_dnf_to_cnf(dnf);
        const Var n = dnf.variable_count();
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
            const Assignment a = oracles::assignment_from_bits(n, bits);
            ASSERT_NE(eval(dnf, a), eval(cnf, a));
        }
    }
}

TEST(RestrictDnf, WorkedExample) {
    const auto phi = parse_qdnf(kWorkedExample).formula();
    EXPECT_EQ(restrict_dnf(phi, bind_all(6, {{1, true}, {2, false}})),
              DnfFormula::from_ints({{3}, {-3, 4}, {5, -6}}, 6));
    EXPECT_EQ(restrict_dnf(phi, bind_all(6, {{1, false}})), DnfFormula::from_ints({{-3, 4}, {5, -6}}, 6));
    EXPECT_EQ(restrict_dnf(DnfFormula::from_ints({{1}}), bind_all(1, {{1, true}})), DnfFormula::constant_true(1));
}

TEST(RestrictDnf, SoundAgainstFullEvaluation) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto q = gen_random_qdnf(3, 5, 2 + seed % 6, 1 + seed % 3, seed + 1000);
        const DnfFormula& dnf = q.formula();
        for (std::uint64_t x = 0; x < 8; ++x) {
            Assignment partial(8);
            for (Var v = 1; v <= 3; ++v)
                partial.bind(v, ((x >> (v - 1)) & 1U) != 0);
            const DnfFormula r = restrict_dnf(dnf, partial);
            for (Var v : r.variables())
                ASSERT_GT(v, 3U);
            for (std::uint64_t y = 0; y < 32; ++y) {
                const Assignment full = oracles::assignment_from_bits(8, x | (y << 3));
                ASSERT_EQ(eval(dnf, full), eval(r, full));
            }
        }
    }
}

TEST(Eval, Semantics) {
    const auto phi = parse_qdnf(kWorkedExample).formula();
    EXPECT_TRUE(eval(phi, bind_all(6, {{1, true}, {2, false}, {3, true}, {4, false}, {5, false}, {6, false}})));
    // All-false: only (y3 ∧ ¬y4) could fire, and y3 is false. Confirmed by the enumeration oracle below.
    const Assignment zero = oracles::assignment_from_bits(6, 0);
    EXPECT_FALSE(eval(phi, zero));
    EXPECT_TRUE(eval(CnfFormula({}, 3), zero));
    EXPECT_FALSE(eval(DnfFormula({}, 3), zero));
    EXPECT_THROW(eval(phi, bind_all(6, {{1, true}})), InvalidInstance);
}

TEST(Assignment, DomainChecks) {
    Assignment a(3);
    EXPECT_FALSE(a.is_total());
    a.bind(1, true);
    a.bind(2, false);
    a.bind(3, true);
    EXPECT_TRUE(a.is_total());
    EXPECT_THROW(a.bind(4, true), InvalidInstance);
    a.unbind(2);
    EXPECT_EQ(a.bound_variables(), (std::vector<Var>{1, 3}));
}

TEST(QDnfInstance, Invariants) {
    EXPECT_THROW(QDnfInstance(DnfFormula::from_ints({{1}}), {1}, {1}), InvalidInstance);
    EXPECT_THROW(QDnfInstance(DnfFormula::from_ints({{1, 2}}), {1}, {}), InvalidInstance);
    // Quantified variables need not occur in the formula.
    EXPECT_NO_THROW(QDnfInstance(DnfFormula({}, 3), {1}, {2, 3}));
}

TEST(Dimacs, ParseAndWrite) {
    const auto cnf = parse_dimacs("c header\np cnf 3 2\n1 -2\n 0 3 0\n");
    EXPECT_EQ(cnf, CnfFormula::from_ints({{1, -2}, {3}}));
    EXPECT_EQ(write_dimacs(cnf), "p cnf 3 2\n1 -2 0\n3 0\n");
    EXPECT_THROW(parse_dimacs("p cnf 1 2\n1 0\n"), ParseError);
    EXPECT_THROW(parse_dimacs("p cnf 1 1\n2 0\n"), ParseError);
    EXPECT_EQ(parse_dimacs("p cnf 2 1\n0\n").clauses().size(), 1U);
}
