#pragma once

// ∃∀-DNF: brute-force decision, the few-queries solver enumerating the
// existential block, the existential-subformula split, the one-query kernel
// and the OR-composition that multiplexes t instances behind log t selectors.

#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "oraclekit/formula.hpp"
#include "oraclekit/oracle.hpp"
#include "oraclekit/rng.hpp"

namespace oraclekit {

inline constexpr std::string_view kPhaseFptnp = "fptnp-few";
inline constexpr std::string_view kPhaseQsatKernel = "kernel-qsat";

inline constexpr std::size_t kDefaultQdnfGuard = 26;

/// Exhaustive ∃X∀Y evaluation over bitmasks; no oracle involved.
inline bool decide_qdnf_bruteforce(const QDnfInstance& inst, std::size_t guard = kDefaultQdnfGuard) {
    const auto& xs = inst.existential();
    const auto& ys = inst.universal();
    if (xs.size() + ys.size() > guard || xs.size() + ys.size() > 62)
        throw GuardExceeded("brute force over " + std::to_string(xs.size() + ys.size()) +
                            " variables exceeds guard " + std::to_string(guard));

    std::vector<int> bit(inst.formula().variable_count() + 1, -1);
    for (std::size_t i = 0; i < xs.size(); ++i)
        bit[xs[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < ys.size(); ++i)
        bit[ys[i]] = static_cast<int>(xs.size() + i);

    struct Mask {
        std::uint64_t pos = 0, neg = 0;
    };
    std::vector<Mask> terms;
    for (const auto& t : inst.formula().terms()) {
        Mask m;
        for (const Literal l : t)
            (l.positive ? m.pos : m.neg) |= std::uint64_t{1} << bit[l.var];
        terms.push_back(m);
    }

    const std::uint64_t x_bits = (std::uint64_t{1} << xs.size()) - 1;
    const std::uint64_t y_count = std::uint64_t{1} << ys.size();
    std::vector<Mask> live;
    for (std::uint64_t x = 0; x <= x_bits; ++x) {
        // Keep only terms whose existential part agrees with x.
        live.clear();
        for (const auto& m : terms)
            if ((m.pos & x_bits & ~x) == 0 && (m.neg & x_bits & x) == 0)
                live.push_back(m);
        bool all = true;
        for (std::uint64_t y = 0; y < y_count && all; ++y) {
            const std::uint64_t a = x | (y << xs.size());
            all = std::any_of(live.begin(), live.end(),
                              [a](const Mask& m) { return (a & m.pos) == m.pos && (a & m.neg) == 0; });
        }
        if (all)
            return true;
        if (x == x_bits)
            break;
    }
    return false;
}

/// Enumerates X-assignments lexicographically (ascending variable index,
/// false before true) and asks one tautology query per assignment, stopping
/// at the first tautology.
inline bool decide_qdnf_fptnp(const QDnfInstance& inst, const OracleBackend& backend, OracleLedger& ledger) {
    const auto& xs = inst.existential();
    if (xs.size() > 62)
        throw GuardExceeded("cannot enumerate 2^" + std::to_string(xs.size()) + " existential assignments");
    const std::uint64_t total = std::uint64_t{1} << xs.size();
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Assignment partial(inst.formula().variable_count());
        for (std::size_t i = 0; i < xs.size(); ++i)
            partial.bind(xs[i], ((idx >> (xs.size() - 1 - i)) & 1U) != 0);
        if (query_dnf_tautology(backend, ledger, restrict_dnf(inst.formula(), partial), kPhaseFptnp))
            return true;
    }
    return false;
}

struct SubformulaSplit {
    QDnfInstance phi1;     // terms variable-connected to some existential variable
    DnfFormula phi2;       // the rest; universal variables only
    std::size_t phi1_size; // total literal count of phi1
};

/// Splits the terms into the closure around the existential variables and the
/// independent universal remainder. phi1 keeps every existential variable and
/// the universal variables it mentions.
inline SubformulaSplit split_existential(const QDnfInstance& inst) {
    const auto& f = inst.formula();
    std::vector<Var> parent(f.variable_count() + 1);
    std::iota(parent.begin(), parent.end(), Var{0});
    auto find = [&](Var v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (const auto& t : f.terms())
        for (std::size_t i = 1; i < t.size(); ++i)
            parent[find(t[i].var)] = find(t[0].var);

    std::vector<char> root_has_existential(f.variable_count() + 1, 0);
    for (const auto& t : f.terms())
        for (const Literal l : t)
            if (inst.is_existential(l.var))
                root_has_existential[find(l.var)] = 1;

    std::vector<LiteralList> c, c_bar;
    std::size_t size = 0;
    for (const auto& t : f.terms()) {
        if (!t.empty() && root_has_existential[find(t[0].var)]) {
            size += t.size();
            c.push_back(t);
        } else {
            c_bar.push_back(t);
        }
    }
    DnfFormula phi1_formula(std::move(c), f.variable_count());
    std::vector<Var> phi1_universal;
    for (Var v : phi1_formula.variables())
        if (inst.is_universal(v))
            phi1_universal.push_back(v);
    return {QDnfInstance(std::move(phi1_formula), inst.existential(), std::move(phi1_universal)),
            DnfFormula(std::move(c_bar), f.variable_count()), size};
}

/// Canonical constant-size yes-instance: ∃x1. x1.
inline QDnfInstance trivial_yes_qdnf() { return {DnfFormula::from_ints({{1}}), {1}, {}}; }

/// One tautology query on the universal remainder; either the trivial
/// yes-instance or the existential subformula comes out. Variables are not
/// renumbered; the declared count shrinks to the largest quantified survivor.
inline QDnfInstance kernelize_qdnf(const QDnfInstance& inst, const OracleBackend& backend, OracleLedger& ledger) {
    SubformulaSplit split = split_existential(inst);
    if (query_dnf_tautology(backend, ledger, split.phi2, kPhaseQsatKernel))
        return trivial_yes_qdnf();
    Var top = 0;
    for (Var v : split.phi1.existential())
        top = std::max(top, v);
    for (Var v : split.phi1.universal())
        top = std::max(top, v);
    return {DnfFormula(split.phi1.formula().terms(), top), split.phi1.existential(), split.phi1.universal()};
}

/// OR-composition. Instances must agree on (|X|, |Y|). The j-th existential
/// (universal) variable of each input, by ascending index, becomes variable j
/// (n1 + j); selectors z_1..z_L follow. Input i (0-based) gets the selector
/// pattern of i in binary, least significant bit on z_1. t is padded to a
/// power of two >= 2 by repeating the first instance.
inline QDnfInstance compose_qdnf_or(std::span<const QDnfInstance> instances) {
    if (instances.empty())
        throw InvalidInstance("composition needs at least one instance");
    const std::size_t n1 = instances.front().existential().size();
    const std::size_t n2 = instances.front().universal().size();
    for (std::size_t i = 1; i < instances.size(); ++i)
        if (instances[i].existential().size() != n1 || instances[i].universal().size() != n2)
            throw InvalidInstance("instance " + std::to_string(i + 1) + " has shape (" +
                                  std::to_string(instances[i].existential().size()) + "," +
                                  std::to_string(instances[i].universal().size()) + "), expected (" +
                                  std::to_string(n1) + "," + std::to_string(n2) + ")");

    const std::size_t padded = std::max<std::size_t>(2, std::bit_ceil(instances.size()));
    const auto selectors = static_cast<std::size_t>(std::countr_zero(padded));
    const auto base = static_cast<Var>(n1 + n2);
    const auto total = static_cast<Var>(base + selectors);

    std::vector<LiteralList> terms;
    for (std::size_t i = 0; i < padded; ++i) {
        const QDnfInstance& in = instances[i < instances.size() ? i : 0];
        std::vector<Var> rename(in.formula().variable_count() + 1, 0);
        for (std::size_t j = 0; j < n1; ++j)
            rename[in.existential()[j]] = static_cast<Var>(j + 1);
        for (std::size_t j = 0; j < n2; ++j)
            rename[in.universal()[j]] = static_cast<Var>(n1 + j + 1);
        for (const auto& t : in.formula().terms()) {
            LiteralList out;
            for (const Literal l : t)
                out.push_back({rename[l.var], l.positive});
            for (std::size_t j = 0; j < selectors; ++j)
                out.push_back({static_cast<Var>(base + j + 1), ((i >> j) & 1U) != 0});
            terms.push_back(std::move(out));
        }
    }
    std::vector<Var> existential, universal;
    for (Var v = 1; v <= n1; ++v)
        existential.push_back(v);
    for (Var v = base + 1; v <= total; ++v)
        existential.push_back(v);
    for (Var v = static_cast<Var>(n1 + 1); v <= base; ++v)
        universal.push_back(v);
    return {DnfFormula(std::move(terms), total), std::move(existential), std::move(universal)};
}

/// Seeded random instance: X = {1..n1}, Y = {n1+1..n1+n2}; each term draws
/// min(term_len, n1+n2) distinct variables with random polarity.
inline QDnfInstance gen_random_qdnf(std::size_t n1, std::size_t n2, std::size_t terms, std::size_t term_len,
                                    std::uint64_t seed) {
    Rng rng(seed);
    const auto n = static_cast<Var>(n1 + n2);
    std::vector<Var> pool(n);
    std::iota(pool.begin(), pool.end(), Var{1});
    std::vector<LiteralList> rows;
    const std::size_t len = std::min<std::size_t>(term_len, n);
    for (std::size_t t = 0; t < terms; ++t) {
        for (std::size_t i = 0; i < len; ++i)
            std::swap(pool[i], pool[i + rng.below(n - i)]);
        std::vector<Var> chosen(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(len));
        std::sort(chosen.begin(), chosen.end());
        LiteralList term;
        for (Var v : chosen)
            term.push_back({v, rng.coin()});
        rows.push_back(std::move(term));
    }
    std::vector<Var> xs, ys;
    for (Var v = 1; v <= n1; ++v)
        xs.push_back(v);
    for (Var v = static_cast<Var>(n1 + 1); v <= n; ++v)
        ys.push_back(v);
    return {DnfFormula(std::move(rows), n), std::move(xs), std::move(ys)};
}

} // namespace oraclekit
