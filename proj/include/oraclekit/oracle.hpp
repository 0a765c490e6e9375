#pragma once

// The NP-oracle: a backend (builtin DPLL or an external DIMACS solver
// process), a ledger recording every query, and the two query primitives.

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "oraclekit/dpll.hpp"
#include "oraclekit/errors.hpp"
#include "oraclekit/formula.hpp"

namespace oraclekit {

struct OracleVerdict {
    bool satisfiable = false;
    std::optional<Assignment> model;
};

struct LedgerEntry {
    std::string phase;
    std::size_t variables = 0;
    std::size_t clauses = 0;
    bool satisfiable = false;
};

class OracleLedger {
public:
    void record(LedgerEntry entry) { entries_.push_back(std::move(entry)); }

    const std::vector<LedgerEntry>& entries() const { return entries_; }
    std::size_t count() const { return entries_.size(); }
    std::size_t count(std::string_view phase) const {
        return static_cast<std::size_t>(
            std::count_if(entries_.begin(), entries_.end(), [&](const LedgerEntry& e) { return e.phase == phase; }));
    }

private:
    std::vector<LedgerEntry> entries_;
};

struct PhaseSummary {
    std::string phase;
    std::size_t queries = 0;
    std::size_t satisfiable = 0;
    std::size_t max_variables = 0;
    std::size_t max_clauses = 0;
};

struct LedgerSummary {
    std::size_t queries = 0;
    std::size_t max_variables = 0;
    std::size_t max_clauses = 0;
    std::vector<PhaseSummary> phases; // sorted by phase name

    std::size_t count(std::string_view phase) const {
        for (const auto& p : phases)
            if (p.phase == phase)
                return p.queries;
        return 0;
    }

    std::string render() const {
        std::string out = "oracle queries: " + std::to_string(queries) + " (max " + std::to_string(max_variables) +
                          " vars, " + std::to_string(max_clauses) + " clauses)\n";
        for (const auto& p : phases)
            out += "  phase " + p.phase + ": " + std::to_string(p.queries) + " queries, " +
                   std::to_string(p.satisfiable) + " sat, " + std::to_string(p.queries - p.satisfiable) +
                   " unsat, max " + std::to_string(p.max_variables) + " vars, " + std::to_string(p.max_clauses) +
                   " clauses\n";
        return out;
    }
};

inline LedgerSummary ledger_report(const OracleLedger& ledger) {
    LedgerSummary s;
    std::map<std::string, PhaseSummary> by_phase;
    for (const auto& e : ledger.entries()) {
        ++s.queries;
        s.max_variables = std::max(s.max_variables, e.variables);
        s.max_clauses = std::max(s.max_clauses, e.clauses);
        auto& p = by_phase[e.phase];
        p.phase = e.phase;
        ++p.queries;
        p.satisfiable += e.satisfiable ? 1 : 0;
        p.max_variables = std::max(p.max_variables, e.variables);
        p.max_clauses = std::max(p.max_clauses, e.clauses);
    }
    for (auto& [name, p] : by_phase)
        s.phases.push_back(std::move(p));
    return s;
}

/// External solver speaking the SAT-competition output protocol. "{}" in the
/// template is replaced by the (shell-quoted) CNF path; without it the path is appended.
struct ExternalSolver {
    std::string command_template;
    double timeout_seconds = 60.0;
};

class OracleBackend {
public:
    static OracleBackend builtin() { return OracleBackend(); }
    static OracleBackend external(std::string command_template, double timeout_seconds = 60.0) {
        OracleBackend b;
        b.impl_ = ExternalSolver{std::move(command_template), timeout_seconds};
        return b;
    }
    /// External backend from ORACLE_SOLVER_CMD, if set and non-empty.
    static std::optional<OracleBackend> from_environment(double timeout_seconds = 60.0) {
        const char* cmd = std::getenv("ORACLE_SOLVER_CMD");
        if (cmd == nullptr || *cmd == '\0')
            return std::nullopt;
        return external(cmd, timeout_seconds);
    }

    bool is_builtin() const { return std::holds_alternative<std::monostate>(impl_); }
    const ExternalSolver* external_solver() const { return std::get_if<ExternalSolver>(&impl_); }
    std::string name() const { return is_builtin() ? "builtin" : "external"; }

private:
    std::variant<std::monostate, ExternalSolver> impl_;
};

namespace detail {

inline std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

class TempCnfFile {
public:
    explicit TempCnfFile(const std::string& content) {
        std::string pattern = (std::filesystem::temp_directory_path() / "oraclekit-XXXXXX.cnf").string();
        std::vector<char> buf(pattern.begin(), pattern.end());
        buf.push_back('\0');
        int fd = ::mkstemps(buf.data(), 4);
        if (fd < 0)
            throw OracleFailure("cannot create temporary CNF file");
        path_ = buf.data();
        std::size_t written = 0;
        while (written < content.size()) {
            ssize_t n = ::write(fd, content.data() + written, content.size() - written);
            if (n <= 0) {
                ::close(fd);
                std::filesystem::remove(path_);
                throw OracleFailure("cannot write temporary CNF file");
            }
            written += static_cast<std::size_t>(n);
        }
        ::close(fd);
    }
    TempCnfFile(const TempCnfFile&) = delete;
    TempCnfFile& operator=(const TempCnfFile&) = delete;
    ~TempCnfFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct ProcessOutput {
    std::string stdout_text;
    bool timed_out = false;
};

// Runs `command` through /bin/sh, capturing stdout. The child gets its own
// process group so a timeout kills the whole pipeline.
inline ProcessOutput run_shell(const std::string& command, double timeout_seconds) {
    int fds[2];
    if (::pipe(fds) != 0)
        throw OracleFailure("pipe() failed");
    pid_t pid = ::fork();
    if (pid < 0) {
        ::close(fds[0]);
        ::close(fds[1]);
        throw OracleFailure("fork() failed");
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(fds[1], STDOUT_FILENO);
        int devnull = ::open("/dev/null", O_WRONLY);
        if (devnull >= 0)
            ::dup2(devnull, STDERR_FILENO);
        ::close(fds[0]);
        ::close(fds[1]);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(fds[1]);

    ProcessOutput out;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_seconds);
    char buf[4096];
    while (true) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            out.timed_out = true;
            break;
        }
        pollfd p{fds[0], POLLIN, 0};
        int r = ::poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 1000)));
        if (r < 0 && errno == EINTR)
            continue;
        if (r == 0)
            continue;
        ssize_t n = ::read(fds[0], buf, sizeof buf);
        if (n <= 0)
            break;
        out.stdout_text.append(buf, static_cast<std::size_t>(n));
    }
    ::close(fds[0]);
    if (out.timed_out)
        ::kill(-pid, SIGKILL);
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    return out;
}

inline OracleVerdict parse_solver_output(const std::string& text, Var variable_count) {
    std::optional<bool> sat;
    bool saw_values = false;
    Assignment model(variable_count);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto toks = split_tokens(line);
        if (toks.empty())
            continue;
        if (toks[0] == "s") {
            if (toks.size() >= 2 && toks[1] == "SATISFIABLE")
                sat = true;
            else if (toks.size() >= 2 && toks[1] == "UNSATISFIABLE")
                sat = false;
            else
                throw OracleFailure("external solver reported '" + line + "'");
        } else if (toks[0] == "v") {
            saw_values = true;
            for (std::size_t i = 1; i < toks.size(); ++i) {
                long long x = 0;
                auto [p, ec] = std::from_chars(toks[i].data(), toks[i].data() + toks[i].size(), x);
                if (ec != std::errc() || p != toks[i].data() + toks[i].size())
                    throw OracleFailure("unparseable value line: " + line);
                if (x == 0)
                    continue;
                const auto v = static_cast<Var>(std::llabs(x));
                if (v > variable_count)
                    throw IntegrityError("external model mentions variable " + std::to_string(v) +
                                         " beyond the query's " + std::to_string(variable_count));
                model.bind(v, x > 0);
            }
        }
    }
    if (!sat)
        throw OracleFailure("external solver printed no verdict line");
    OracleVerdict verdict{*sat, std::nullopt};
    if (*sat && saw_values) {
        for (Var v = 1; v <= variable_count; ++v)
            if (!model.is_bound(v))
                model.bind(v, false);
        verdict.model = std::move(model);
    }
    return verdict;
}

inline OracleVerdict run_external(const ExternalSolver& solver, const CnfFormula& cnf) {
    TempCnfFile file(write_dimacs(cnf));
    std::string cmd = solver.command_template;
    const std::string quoted = shell_quote(file.path());
    if (auto pos = cmd.find("{}"); pos != std::string::npos)
        cmd.replace(pos, 2, quoted);
    else
        cmd += " " + quoted;
    ProcessOutput out = run_shell(cmd, solver.timeout_seconds);
    if (out.timed_out)
        throw OracleFailure("external solver timed out after " + std::to_string(solver.timeout_seconds) + " s");
    return parse_solver_output(out.stdout_text, cnf.variable_count());
}

} // namespace detail

/// One NP-oracle query. Every successful call appends exactly one ledger entry.
inline OracleVerdict query_sat(const OracleBackend& backend, OracleLedger& ledger, const CnfFormula& cnf,
                               std::string_view phase) {
    OracleVerdict verdict;
    if (backend.is_builtin()) {
        auto model = solve_builtin(cnf);
        verdict.satisfiable = model.has_value();
        verdict.model = std::move(model);
    } else {
        verdict = detail::run_external(*backend.external_solver(), cnf);
    }
    if (verdict.model && !eval(cnf, *verdict.model))
        throw IntegrityError("oracle model does not satisfy the query");
    ledger.record({std::string(phase), cnf.variable_count(), cnf.clauses().size(), verdict.satisfiable});
    return verdict;
}

/// Tautology of a DNF via one satisfiability query on its negation.
inline bool query_dnf_tautology(const OracleBackend& backend, OracleLedger& ledger, const DnfFormula& dnf,
                                std::string_view phase) {
    return !query_sat(backend, ledger, negate_dnf_to_cnf(dnf), phase).satisfiable;
}

} // namespace oraclekit
