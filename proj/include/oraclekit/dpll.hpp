#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "oraclekit/formula.hpp"

namespace oraclekit {

/// Complete, deterministic DPLL: unit propagation and pure-literal
/// elimination over occurrence counters, chronological backtracking,
/// branching on the variable with the most occurrences in open clauses.
class DpllSolver {
public:
    explicit DpllSolver(const CnfFormula& cnf) : var_count_(cnf.variable_count()) {
        const std::size_t lits = 2 * (static_cast<std::size_t>(var_count_) + 1);
        occurs_.resize(lits);
        open_occurrences_.assign(lits, 0);
        value_.assign(static_cast<std::size_t>(var_count_) + 1, kUnassigned);
        for (const auto& c : cnf.clauses()) {
            if (c.empty())
                has_empty_clause_ = true;
            std::vector<std::uint32_t> clause;
            for (const Literal l : c)
                clause.push_back(encode(l));
            const auto idx = static_cast<std::uint32_t>(clauses_.size());
            for (auto lit : clause) {
                occurs_[lit].push_back(idx);
                ++open_occurrences_[lit];
            }
            clauses_.push_back(std::move(clause));
        }
        true_count_.assign(clauses_.size(), 0);
        false_count_.assign(clauses_.size(), 0);
    }

    /// Returns a total model over 1..variable_count (unconstrained variables
    /// false), or nothing when unsatisfiable.
    std::optional<Assignment> solve() {
        if (has_empty_clause_)
            return std::nullopt;
        for (std::uint32_t c = 0; c < clauses_.size(); ++c)
            if (clauses_[c].size() == 1)
                pending_.push_back(clauses_[c][0]);

        struct Decision {
            std::size_t trail_mark;
            std::uint32_t lit;
            bool flipped;
        };
        std::vector<Decision> decisions;
        while (true) {
            bool ok = propagate() && eliminate_pure();
            if (ok) {
                if (satisfied_clauses_ == clauses_.size())
                    return model();
                const std::uint32_t lit = choose_branch();
                decisions.push_back({trail_.size(), lit, false});
                pending_.push_back(lit);
                continue;
            }
            pending_.clear();
            while (!decisions.empty() && decisions.back().flipped) {
                undo_to(decisions.back().trail_mark);
                decisions.pop_back();
            }
            if (decisions.empty())
                return std::nullopt;
            undo_to(decisions.back().trail_mark);
            decisions.back().flipped = true;
            pending_.push_back(negate(decisions.back().lit));
        }
    }

    std::size_t decisions_made() const { return branch_count_; }

private:
    static constexpr signed char kUnassigned = -1;

    static std::uint32_t encode(Literal l) { return 2 * l.var + (l.positive ? 0 : 1); }
    static std::uint32_t negate(std::uint32_t lit) { return lit ^ 1U; }
    static Var var_of(std::uint32_t lit) { return lit >> 1; }
    static bool positive(std::uint32_t lit) { return (lit & 1U) == 0; }

    signed char lit_value(std::uint32_t lit) const {
        const signed char v = value_[var_of(lit)];
        if (v == kUnassigned)
            return kUnassigned;
        return positive(lit) ? v : static_cast<signed char>(1 - v);
    }

    // Returns false if some clause became fully falsified.
    bool assign(std::uint32_t lit) {
        value_[var_of(lit)] = positive(lit) ? 1 : 0;
        trail_.push_back(lit);
        for (auto c : occurs_[lit]) {
            if (true_count_[c]++ == 0) {
                ++satisfied_clauses_;
                for (auto other : clauses_[c])
                    --open_occurrences_[other];
            }
        }
        bool ok = true;
        for (auto c : occurs_[negate(lit)]) {
            ++false_count_[c];
            if (true_count_[c] != 0)
                continue;
            const std::size_t size = clauses_[c].size();
            if (false_count_[c] == size) {
                ok = false;
            } else if (false_count_[c] + 1 == size) {
                for (auto other : clauses_[c])
                    if (lit_value(other) == kUnassigned) {
                        pending_.push_back(other);
                        break;
                    }
            }
        }
        return ok;
    }

    void unassign(std::uint32_t lit) {
        for (auto c : occurs_[negate(lit)])
            --false_count_[c];
        for (auto c : occurs_[lit]) {
            if (--true_count_[c] == 0) {
                --satisfied_clauses_;
                for (auto other : clauses_[c])
                    ++open_occurrences_[other];
            }
        }
        value_[var_of(lit)] = kUnassigned;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            unassign(trail_.back());
            trail_.pop_back();
        }
    }

    bool propagate() {
        while (!pending_.empty()) {
            const std::uint32_t lit = pending_.back();
            pending_.pop_back();
            const signed char v = lit_value(lit);
            if (v == 1)
                continue;
            if (v == 0)
                return false;
            if (!assign(lit))
                return false;
        }
        return true;
    }

    bool eliminate_pure() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (Var v = 1; v <= var_count_; ++v) {
                if (value_[v] != kUnassigned)
                    continue;
                const std::uint32_t pos = 2 * v;
                const std::uint32_t neg = pos + 1;
                const bool pos_open = open_occurrences_[pos] > 0;
                const bool neg_open = open_occurrences_[neg] > 0;
                if (pos_open == neg_open)
                    continue;
                pending_.push_back(pos_open ? pos : neg);
                changed = true;
            }
            if (changed && !propagate())
                return false;
        }
        return true;
    }

    std::uint32_t choose_branch() {
        ++branch_count_;
        std::uint32_t best = 0;
        std::uint32_t best_score = 0;
        for (Var v = 1; v <= var_count_; ++v) {
            if (value_[v] != kUnassigned)
                continue;
            const std::uint32_t pos = 2 * v;
            const std::uint32_t score = open_occurrences_[pos] + open_occurrences_[pos + 1];
            if (score > best_score) {
                best_score = score;
                best = open_occurrences_[pos] >= open_occurrences_[pos + 1] ? pos : pos + 1;
            }
        }
        return best;
    }

    Assignment model() const {
        Assignment a(var_count_);
        for (Var v = 1; v <= var_count_; ++v)
            a.bind(v, value_[v] == 1);
        return a;
    }

    Var var_count_;
    bool has_empty_clause_ = false;
    std::vector<std::vector<std::uint32_t>> clauses_;
    std::vector<std::vector<std::uint32_t>> occurs_;
    std::vector<std::uint32_t> open_occurrences_;
    std::vector<std::uint32_t> true_count_;
    std::vector<std::uint32_t> false_count_;
    std::vector<signed char> value_;
    std::vector<std::uint32_t> trail_;
    std::vector<std::uint32_t> pending_;
    std::size_t satisfied_clauses_ = 0;
    std::size_t branch_count_ = 0;
};

inline std::optional<Assignment> solve_builtin(const CnfFormula& cnf) { return DpllSolver(cnf).solve(); }

} // namespace oraclekit
