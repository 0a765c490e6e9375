#pragma once

// Boolean formula data model: literals, DNF/CNF formulas, assignments and
// the two-level quantified DNF instance, plus the QDNF and DIMACS codecs.

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "oraclekit/errors.hpp"

namespace oraclekit {

using Var = std::uint32_t;

struct Literal {
    Var var = 0;
    bool positive = true;

    constexpr Literal() = default;
    constexpr Literal(Var v, bool pos) : var(v), positive(pos) {}

    static Literal from_dimacs(long long x) {
        if (x == 0)
            throw InvalidInstance("literal 0 is not a variable");
        return {static_cast<Var>(std::llabs(x)), x > 0};
    }

    long long dimacs() const { return positive ? static_cast<long long>(var) : -static_cast<long long>(var); }

    constexpr Literal operator~() const { return {var, !positive}; }

    friend constexpr auto operator<=>(const Literal&, const Literal&) = default;
};

using LiteralList = std::vector<Literal>;

namespace detail {

inline void check_literal_list(const LiteralList& lits, Var variable_count, const char* what) {
    for (std::size_t i = 0; i < lits.size(); ++i) {
        const Literal l = lits[i];
        if (l.var == 0 || l.var > variable_count)
            throw InvalidInstance(std::string(what) + " mentions variable " + std::to_string(l.var) +
                                  " outside 1.." + std::to_string(variable_count));
        for (std::size_t j = 0; j < i; ++j) {
            if (lits[j].var != l.var)
                continue;
            if (lits[j].positive != l.positive)
                throw InvalidInstance(std::string(what) + " contains variable " + std::to_string(l.var) +
                                      " and its negation");
            throw InvalidInstance(std::string(what) + " repeats variable " + std::to_string(l.var));
        }
    }
}

inline std::vector<LiteralList> from_ints(std::initializer_list<std::initializer_list<long long>> rows, Var& max_var) {
    std::vector<LiteralList> out;
    for (const auto& row : rows) {
        LiteralList lits;
        for (long long x : row) {
            lits.push_back(Literal::from_dimacs(x));
            max_var = std::max(max_var, lits.back().var);
        }
        out.push_back(std::move(lits));
    }
    return out;
}

inline std::vector<Var> occurring_variables(const std::vector<LiteralList>& rows) {
    std::vector<Var> vars;
    for (const auto& row : rows)
        for (const Literal l : row)
            vars.push_back(l.var);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

} // namespace detail

/// Disjunction of terms, each term a conjunction of literals over variables
/// 1..variable_count. Zero terms is constant false; a single empty term is
/// constant true.
class DnfFormula {
public:
    DnfFormula() = default;
    DnfFormula(std::vector<LiteralList> terms, Var variable_count)
        : terms_(std::move(terms)), variable_count_(variable_count) {
        for (const auto& t : terms_)
            detail::check_literal_list(t, variable_count_, "term");
    }

    /// Builds from signed DIMACS-style integers; variable_count defaults to the largest variable.
    static DnfFormula from_ints(std::initializer_list<std::initializer_list<long long>> terms, Var variable_count = 0) {
        Var max_var = 0;
        auto rows = detail::from_ints(terms, max_var);
        return {std::move(rows), std::max(variable_count, max_var)};
    }

    static DnfFormula constant_true(Var variable_count = 0) { return {{LiteralList{}}, variable_count}; }
    static DnfFormula constant_false(Var variable_count = 0) { return {{}, variable_count}; }

    const std::vector<LiteralList>& terms() const { return terms_; }
    Var variable_count() const { return variable_count_; }
    bool empty() const { return terms_.empty(); }
    std::vector<Var> variables() const { return detail::occurring_variables(terms_); }

    friend bool operator==(const DnfFormula&, const DnfFormula&) = default;

private:
    std::vector<LiteralList> terms_;
    Var variable_count_ = 0;
};

/// Conjunction of clauses. Zero clauses is constant true; a member empty
/// clause makes the formula unsatisfiable.
class CnfFormula {
public:
    CnfFormula() = default;
    CnfFormula(std::vector<LiteralList> clauses, Var variable_count)
        : clauses_(std::move(clauses)), variable_count_(variable_count) {
        for (const auto& c : clauses_)
            detail::check_literal_list(c, variable_count_, "clause");
    }

    static CnfFormula from_ints(std::initializer_list<std::initializer_list<long long>> clauses, Var variable_count = 0) {
        Var max_var = 0;
        auto rows = detail::from_ints(clauses, max_var);
        return {std::move(rows), std::max(variable_count, max_var)};
    }

    const std::vector<LiteralList>& clauses() const { return clauses_; }
    Var variable_count() const { return variable_count_; }
    std::vector<Var> variables() const { return detail::occurring_variables(clauses_); }

    friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

private:
    std::vector<LiteralList> clauses_;
    Var variable_count_ = 0;
};

/// Partial map from the declared variables 1..declared() to truth values.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(Var declared) : values_(static_cast<std::size_t>(declared) + 1, kUnbound) {}

    Var declared() const { return values_.empty() ? 0 : static_cast<Var>(values_.size() - 1); }

    void bind(Var v, bool value) {
        if (v == 0 || v > declared())
            throw InvalidInstance("variable " + std::to_string(v) + " is not declared in this assignment");
        values_[v] = value ? kTrue : kFalse;
    }

    void unbind(Var v) {
        if (v != 0 && v <= declared())
            values_[v] = kUnbound;
    }

    std::optional<bool> value(Var v) const {
        if (v == 0 || v > declared() || values_[v] == kUnbound)
            return std::nullopt;
        return values_[v] == kTrue;
    }

    bool is_bound(Var v) const { return value(v).has_value(); }

    bool is_total() const {
        return std::all_of(values_.begin() + (values_.empty() ? 0 : 1), values_.end(),
                           [](signed char x) { return x != kUnbound; });
    }

    bool satisfies(Literal l) const {
        auto v = value(l.var);
        return v && *v == l.positive;
    }

    std::vector<Var> bound_variables() const {
        std::vector<Var> out;
        for (Var v = 1; v <= declared(); ++v)
            if (values_[v] != kUnbound)
                out.push_back(v);
        return out;
    }

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    static constexpr signed char kUnbound = -1;
    static constexpr signed char kFalse = 0;
    static constexpr signed char kTrue = 1;
    std::vector<signed char> values_;
};

namespace detail {

inline void require_bound(const std::vector<LiteralList>& rows, const Assignment& a) {
    for (const auto& row : rows)
        for (const Literal l : row)
            if (!a.is_bound(l.var))
                throw InvalidInstance("assignment leaves variable " + std::to_string(l.var) + " unbound");
}

} // namespace detail

inline bool eval(const DnfFormula& dnf, const Assignment& a) {
    detail::require_bound(dnf.terms(), a);
    return std::any_of(dnf.terms().begin(), dnf.terms().end(), [&](const LiteralList& t) {
        return std::all_of(t.begin(), t.end(), [&](Literal l) { return a.satisfies(l); });
    });
}

inline bool eval(const CnfFormula& cnf, const Assignment& a) {
    detail::require_bound(cnf.clauses(), a);
    return std::all_of(cnf.clauses().begin(), cnf.clauses().end(), [&](const LiteralList& c) {
        return std::any_of(c.begin(), c.end(), [&](Literal l) { return a.satisfies(l); });
    });
}

/// De Morgan: each term becomes one clause with every polarity flipped.
inline CnfFormula negate_dnf_to_cnf(const DnfFormula& dnf) {
    std::vector<LiteralList> clauses;
    clauses.reserve(dnf.terms().size());
    for (const auto& term : dnf.terms()) {
        LiteralList clause;
        clause.reserve(term.size());
        for (const Literal l : term)
            clause.push_back(~l);
        clauses.push_back(std::move(clause));
    }
    return {std::move(clauses), dnf.variable_count()};
}

/// Substitutes the bound variables of `partial`. Falsified terms are dropped,
/// satisfied literals removed; an emptied term collapses the result to constant true.
inline DnfFormula restrict_dnf(const DnfFormula& dnf, const Assignment& partial) {
    std::vector<LiteralList> terms;
    for (const auto& term : dnf.terms()) {
        LiteralList rest;
        bool falsified = false;
        for (const Literal l : term) {
            if (auto v = partial.value(l.var)) {
                if (*v != l.positive) {
                    falsified = true;
                    break;
                }
            } else {
                rest.push_back(l);
            }
        }
        if (falsified)
            continue;
        if (rest.empty())
            return DnfFormula::constant_true(dnf.variable_count());
        terms.push_back(std::move(rest));
    }
    return {std::move(terms), dnf.variable_count()};
}

/// ∃X ∀Y φ with φ in DNF. Quantifier sets are kept sorted.
class QDnfInstance {
public:
    QDnfInstance() = default;
    QDnfInstance(DnfFormula formula, std::vector<Var> existential, std::vector<Var> universal)
        : formula_(std::move(formula)), existential_(std::move(existential)), universal_(std::move(universal)) {
        normalize(existential_, "existential");
        normalize(universal_, "universal");
        std::vector<Var> both;
        std::set_intersection(existential_.begin(), existential_.end(), universal_.begin(), universal_.end(),
                              std::back_inserter(both));
        if (!both.empty())
            throw InvalidInstance("variable " + std::to_string(both.front()) + " quantified twice");
        for (Var v : formula_.variables())
            if (!is_existential(v) && !is_universal(v))
                throw InvalidInstance("variable " + std::to_string(v) + " occurs but is not quantified");
    }

    const DnfFormula& formula() const { return formula_; }
    const std::vector<Var>& existential() const { return existential_; }
    const std::vector<Var>& universal() const { return universal_; }

    bool is_existential(Var v) const { return std::binary_search(existential_.begin(), existential_.end(), v); }
    bool is_universal(Var v) const { return std::binary_search(universal_.begin(), universal_.end(), v); }

    friend bool operator==(const QDnfInstance&, const QDnfInstance&) = default;

private:
    void normalize(std::vector<Var>& vars, const char* which) const {
        std::sort(vars.begin(), vars.end());
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (vars[i] == 0 || vars[i] > formula_.variable_count())
                throw InvalidInstance(std::string(which) + " variable " + std::to_string(vars[i]) + " out of range");
            if (i > 0 && vars[i] == vars[i - 1])
                throw InvalidInstance("variable " + std::to_string(vars[i]) + " quantified twice");
        }
    }

    DnfFormula formula_;
    std::vector<Var> existential_;
    std::vector<Var> universal_;
};

// ---------------------------------------------------------------------------
// Codecs
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline long long parse_int(std::string_view tok, std::size_t line) {
    long long x = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
    return x;
}

inline long long parse_nonnegative(std::string_view tok, std::size_t line) {
    long long x = parse_int(tok, line);
    if (x < 0)
        throw ParseError(line, "expected a nonnegative integer, got '" + std::string(tok) + "'");
    return x;
}

// Reads a zero-terminated list of signed literals from tokens[first..].
inline LiteralList parse_literal_row(std::span<const std::string_view> toks, std::size_t line, Var variable_count,
                                     const char* what) {
    if (toks.empty() || toks.back() != "0")
        throw ParseError(line, std::string(what) + " must be terminated by 0");
    LiteralList lits;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
        long long x = parse_int(toks[i], line);
        if (x == 0)
            throw ParseError(line, "0 in the middle of a " + std::string(what));
        if (std::llabs(x) > static_cast<long long>(variable_count))
            throw ParseError(line, "literal " + std::to_string(x) + " out of range 1.." + std::to_string(variable_count));
        lits.push_back(Literal::from_dimacs(x));
    }
    try {
        check_literal_list(lits, variable_count, what);
    } catch (const InvalidInstance& e) {
        throw ParseError(line, e.what());
    }
    return lits;
}

inline void append_row(std::string& out, const LiteralList& row) {
    for (const Literal l : row) {
        out += std::to_string(l.dimacs());
        out += ' ';
    }
    out += "0\n";
}

inline bool is_comment_or_blank(const std::vector<std::string_view>& toks) {
    return toks.empty() || toks.front() == "c" || toks.front().front() == 'c';
}

} // namespace detail

/// Reads the QDNF format: "p qdnf <vars> <terms>", one "e ... 0" line, one
/// "a ... 0" line, then one zero-terminated term per line. "c" lines are comments.
inline QDnfInstance parse_qdnf(std::istream& in) {
    std::string raw;
    std::size_t line = 0;
    bool have_header = false;
    Var variable_count = 0;
    long long expected_terms = 0;
    std::optional<std::vector<Var>> existential, universal;
    std::vector<Var> owner(1, 0); // 0 = unquantified, 1 = e, 2 = a
    std::vector<LiteralList> terms;

    auto read_quantifier = [&](const std::vector<std::string_view>& toks, std::optional<std::vector<Var>>& slot,
                               int tag) {
        if (slot)
            throw ParseError(line, std::string("duplicate '") + std::string(toks[0]) + "' line");
        if (!terms.empty())
            throw ParseError(line, "quantifier line after terms");
        if (toks.back() != "0")
            throw ParseError(line, "quantifier line must be terminated by 0");
        std::vector<Var> vars;
        for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
            long long v = detail::parse_int(toks[i], line);
            if (v <= 0 || v > static_cast<long long>(variable_count))
                throw ParseError(line, "quantified variable " + std::to_string(v) + " out of range 1.." +
                                           std::to_string(variable_count));
            if (owner[static_cast<std::size_t>(v)] != 0)
                throw ParseError(line, "variable " + std::to_string(v) + " quantified twice");
            owner[static_cast<std::size_t>(v)] = tag;
            vars.push_back(static_cast<Var>(v));
        }
        slot = std::move(vars);
    };

    while (std::getline(in, raw)) {
        ++line;
        auto toks = detail::split_tokens(raw);
        if (detail::is_comment_or_blank(toks))
            continue;
        if (!have_header) {
            if (toks.size() != 4 || toks[0] != "p" || toks[1] != "qdnf")
                throw ParseError(line, "expected header 'p qdnf <vars> <terms>'");
            long long nv = detail::parse_nonnegative(toks[2], line);
            expected_terms = detail::parse_nonnegative(toks[3], line);
            if (nv > 0x7fffffff)
                throw ParseError(line, "variable count too large");
            variable_count = static_cast<Var>(nv);
            owner.assign(static_cast<std::size_t>(variable_count) + 1, 0);
            have_header = true;
            continue;
        }
        if (toks[0] == "p")
            throw ParseError(line, "duplicate header");
        if (toks[0] == "e") {
            read_quantifier(toks, existential, 1);
            continue;
        }
        if (toks[0] == "a") {
            read_quantifier(toks, universal, 2);
            continue;
        }
        LiteralList term = detail::parse_literal_row(toks, line, variable_count, "term");
        for (const Literal l : term)
            if (owner[l.var] == 0)
                throw ParseError(line, "variable " + std::to_string(l.var) + " occurs but is not quantified");
        terms.push_back(std::move(term));
        if (static_cast<long long>(terms.size()) > expected_terms)
            throw ParseError(line, "more terms than declared in the header");
    }
    if (!have_header)
        throw ParseError(line == 0 ? 1 : line, "missing header 'p qdnf <vars> <terms>'");
    if (static_cast<long long>(terms.size()) != expected_terms)
        throw ParseError(line, "header declares " + std::to_string(expected_terms) + " terms, found " +
                                   std::to_string(terms.size()));
    return {DnfFormula(std::move(terms), variable_count), existential.value_or(std::vector<Var>{}),
            universal.value_or(std::vector<Var>{})};
}

inline QDnfInstance parse_qdnf(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_qdnf(in);
}

inline std::string serialize_qdnf(const QDnfInstance& inst) {
    const auto& f = inst.formula();
    std::string out = "p qdnf " + std::to_string(f.variable_count()) + " " + std::to_string(f.terms().size()) + "\n";
    out += "e ";
    for (Var v : inst.existential())
        out += std::to_string(v) + " ";
    out += "0\na ";
    for (Var v : inst.universal())
        out += std::to_string(v) + " ";
    out += "0\n";
    for (const auto& t : f.terms())
        detail::append_row(out, t);
    return out;
}

/// DIMACS CNF. Clauses may span lines; `line_offset` shifts reported line
/// numbers when the CNF is embedded in a larger document.
inline CnfFormula parse_dimacs(std::istream& in, std::size_t line_offset = 0) {
    std::string raw;
    std::size_t line = line_offset;
    bool have_header = false;
    Var variable_count = 0;
    long long expected = 0;
    std::vector<LiteralList> clauses;
    LiteralList current;
    bool open = false;
    while (std::getline(in, raw)) {
        ++line;
        auto toks = detail::split_tokens(raw);
        if (detail::is_comment_or_blank(toks))
            continue;
        if (toks[0] == "%")
            break;
        if (!have_header) {
            if (toks.size() != 4 || toks[0] != "p" || toks[1] != "cnf")
                throw ParseError(line, "expected header 'p cnf <vars> <clauses>'");
            long long nv = detail::parse_nonnegative(toks[2], line);
            expected = detail::parse_nonnegative(toks[3], line);
            if (nv > 0x7fffffff)
                throw ParseError(line, "variable count too large");
            variable_count = static_cast<Var>(nv);
            have_header = true;
            continue;
        }
        for (auto tok : toks) {
            long long x = detail::parse_int(tok, line);
            if (x == 0) {
                try {
                    detail::check_literal_list(current, variable_count, "clause");
                } catch (const InvalidInstance& e) {
                    throw ParseError(line, e.what());
                }
                clauses.push_back(std::move(current));
                current.clear();
                open = false;
                continue;
            }
            if (std::llabs(x) > static_cast<long long>(variable_count))
                throw ParseError(line, "literal " + std::to_string(x) + " out of range 1.." + std::to_string(variable_count));
            current.push_back(Literal::from_dimacs(x));
            open = true;
        }
    }
    if (!have_header)
        throw ParseError(line == line_offset ? line_offset + 1 : line, "missing header 'p cnf <vars> <clauses>'");
    if (open)
        throw ParseError(line, "last clause is not terminated by 0");
    if (static_cast<long long>(clauses.size()) != expected)
        throw ParseError(line, "header declares " + std::to_string(expected) + " clauses, found " +
                                   std::to_string(clauses.size()));
    return {std::move(clauses), variable_count};
}

inline CnfFormula parse_dimacs(std::string_view text, std::size_t line_offset = 0) {
    std::istringstream in{std::string(text)};
    return parse_dimacs(in, line_offset);
}

inline std::string write_dimacs(const CnfFormula& cnf) {
    std::string out = "p cnf " + std::to_string(cnf.variable_count()) + " " + std::to_string(cnf.clauses().size()) + "\n";
    for (const auto& c : cnf.clauses())
        detail::append_row(out, c);
    return out;
}

} // namespace oraclekit
