#pragma once

// Batch front end. run_command() never exits the process; it returns the
// status (0 yes / success, 1 no, 2 usage or parse error, 3 oracle failure).

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oraclekit/cliquedel.hpp"
#include "oraclekit/discovery.hpp"
#include "oraclekit/generators.hpp"
#include "oraclekit/graph.hpp"
#include "oraclekit/oracle.hpp"
#include "oraclekit/qsat.hpp"
#include "oraclekit/verify.hpp"

namespace oraclekit {

enum ExitStatus : int { kExitYes = 0, kExitNo = 1, kExitUsage = 2, kExitOracle = 3 };

/// Deterministic report: every line except the optional wall time depends
/// only on the inputs, the seed and the backend.
struct RunReport {
    std::string command;
    std::uint64_t seed = kDefaultSuiteSeed;
    std::string backend = "builtin";
    std::vector<std::string> lines;
    std::optional<std::string> answer;
    std::optional<LedgerSummary> ledger;
    std::optional<double> wall_seconds;

    std::string render() const {
        std::string out = "command: " + command + "\nseed: " + std::to_string(seed) + "\nbackend: " + backend + "\n";
        for (const auto& l : lines)
            out += l + "\n";
        if (answer)
            out += "answer: " + *answer + "\n";
        if (ledger)
            out += ledger->render();
        if (wall_seconds) {
            std::ostringstream t;
            t << std::fixed << std::setprecision(3) << *wall_seconds;
            out += "wall time: " + t.str() + " s\n";
        }
        return out;
    }
};

namespace cli {

struct Options {
    std::string input;
    std::vector<std::string> inputs;
    std::string output;
    std::string backend = "builtin";
    std::string solver_cmd;
    double timeout = 60.0;
    std::uint64_t seed = kDefaultSuiteSeed;
    std::string param;
    std::size_t guard = 0;
    bool weighted = false;
    bool timing = false;
    std::string method;
    std::string target; // verify suite / gen family
    std::string shape;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInstance("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw InvalidInstance("cannot write '" + path + "'");
}

inline std::vector<std::uint64_t> parse_param_list(const std::string& text, std::size_t expected, const char* what) {
    std::vector<std::uint64_t> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || p != item.data() + item.size() || item.empty())
            throw InvalidInstance(std::string("--param expects ") + what + ", got '" + text + "'");
        values.push_back(v);
    }
    if (values.size() != expected)
        throw InvalidInstance(std::string("--param expects ") + what + ", got '" + text + "'");
    return values;
}

inline std::string format_set(const VertexSet& vs) {
    std::string out = "{";
    for (std::size_t i = 0; i < vs.size(); ++i)
        out += (i ? "," : "") + std::to_string(vs[i] + 1);
    return out + "}";
}

class Session {
public:
    Session(const Options& opt, std::string command) : opt_(opt) {
        report_.command = std::move(command);
        report_.seed = opt.seed;
        if (opt.backend == "builtin") {
            backend_ = OracleBackend::builtin();
        } else if (opt.backend == "external") {
            std::string cmd = opt.solver_cmd;
            if (cmd.empty())
                if (const char* env = std::getenv("ORACLE_SOLVER_CMD"))
                    cmd = env;
            if (cmd.empty())
                throw InvalidInstance("--backend external needs --solver-cmd or ORACLE_SOLVER_CMD");
            backend_ = OracleBackend::external(cmd, opt.timeout);
        } else {
            throw InvalidInstance("unknown backend '" + opt.backend + "'");
        }
        report_.backend = backend_.name();
    }

    const OracleBackend& backend() const { return backend_; }
    OracleLedger& ledger() { return ledger_; }
    RunReport& report() { return report_; }

    int finish(std::ostream& out, std::optional<bool> answer) {
        if (answer)
            report_.answer = *answer ? "yes" : "no";
        report_.ledger = ledger_report(ledger_);
        if (opt_.timing)
            report_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        out << report_.render();
        return answer.value_or(true) ? kExitYes : kExitNo;
    }

private:
    const Options& opt_;
    OracleBackend backend_ = OracleBackend::builtin();
    OracleLedger ledger_;
    RunReport report_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline CfvdInstance load_cfvd(const Options& opt, const std::string& path) {
    GraphDocument doc = parse_graph(read_file(path));
    std::optional<std::pair<Weight, Weight>> params = doc.params;
    if (!opt.param.empty()) {
        auto v = parse_param_list(opt.param, 2, "h,k");
        params = {{v[0], v[1]}};
    }
    if (!params)
        throw InvalidInstance("no (h, k): add a 'param h k' footer or pass --param h,k");
    CfvdInstance inst{std::move(doc.graph), params->first, params->second, doc.weighted || opt.weighted};
    inst.validate();
    return inst;
}

inline std::string dump_cfvd(const CfvdInstance& inst) {
    return serialize_graph({inst.graph, inst.weighted, {{inst.h, inst.k}}});
}

inline DvcrInstance load_dvcr(const Options& opt, const std::string& path) {
    DvcrInstance inst = parse_dvcr_bundle(read_file(path));
    if (!opt.param.empty()) {
        auto v = parse_param_list(opt.param, 2, "k,l");
        if (v[1] < 1)
            throw InvalidInstance("sequence length must be at least 1");
        inst.k = v[0];
        inst.ell = BigInt(v[1]);
    }
    inst.validate();
    return inst;
}

inline std::string qdnf_stats(const QDnfInstance& q) {
    return "size: " + std::to_string(q.formula().variable_count()) + " variables, " +
           std::to_string(q.formula().terms().size()) + " terms, |X| = " + std::to_string(q.existential().size()) +
           ", |Y| = " + std::to_string(q.universal().size()) +
           ", existential subformula " + std::to_string(split_existential(q).phi1_size);
}

inline std::string graph_stats(const CfvdInstance& c) {
    return "size: " + std::to_string(c.graph.size()) + " vertices, " + std::to_string(c.graph.edge_count()) +
           " edges, h = " + std::to_string(c.h) + ", k = " + std::to_string(c.k) +
           (c.weighted ? ", weighted" : ", unweighted");
}

inline std::string dvcr_stats(const DvcrInstance& d) {
    return "size: " + std::to_string(d.n) + " vertices, |S| = " + std::to_string(d.s.size()) + ", |T| = " +
           std::to_string(d.t.size()) + ", k = " + std::to_string(d.k) + ", l = " + d.ell.str();
}

inline int cmd_solve(const std::string& what, const Options& opt, const std::string& command, std::ostream& out) {
    Session s(opt, command);
    if (what == "qsat") {
        const QDnfInstance inst = parse_qdnf(read_file(opt.input));
        s.report().lines.push_back(qdnf_stats(inst));
        const std::string method = opt.method.empty() ? "fptnp" : opt.method;
        s.report().lines.push_back("method: " + method);
        bool answer;
        if (method == "fptnp")
            answer = decide_qdnf_fptnp(inst, s.backend(), s.ledger());
        else if (method == "brute")
            answer = decide_qdnf_bruteforce(inst, opt.guard ? opt.guard : kDefaultQdnfGuard);
        else if (method == "kernel")
            answer = decide_qdnf_fptnp(kernelize_qdnf(inst, s.backend(), s.ledger()), s.backend(), s.ledger());
        else
            throw InvalidInstance("unknown qsat method '" + method + "' (fptnp, brute, kernel)");
        return s.finish(out, answer);
    }
    if (what == "cfvd") {
        const CfvdInstance inst = load_cfvd(opt, opt.input);
        s.report().lines.push_back(graph_stats(inst));
        const std::string method = opt.method.empty() ? "search" : opt.method;
        s.report().lines.push_back("method: " + method);
        bool answer;
        if (method == "search")
            answer = solve_cfvd_searchtree(inst, s.backend(), s.ledger());
        else if (method == "brute")
            answer = solve_cfvd_bruteforce(inst, opt.guard ? opt.guard : kDefaultCfvdGuard);
        else if (method == "hitting-set")
            answer = solve_cfvd_by_hitting_set(inst);
        else if (method == "kernel")
            answer = solve_cfvd_searchtree(kernelize_cfvd(inst, s.backend(), s.ledger()), s.backend(), s.ledger());
        else
            throw InvalidInstance("unknown cfvd method '" + method + "' (search, brute, hitting-set, kernel)");
        return s.finish(out, answer);
    }
    const DvcrInstance inst = load_dvcr(opt, opt.input);
    s.report().lines.push_back(dvcr_stats(inst));
    const Graph g = discover_graph(inst.spec, s.backend(), s.ledger());
    s.report().lines.push_back("discovered: " + std::to_string(g.edge_count()) + " edges");
    const ReconfResult r = solve_dvcr_bfs(g, inst.s, inst.t, inst.k, inst.ell, opt.guard ? opt.guard : kDefaultDvcrGuard);
    if (r.shortest) {
        s.report().lines.push_back("shortest: " + std::to_string(*r.shortest) + " covers");
        std::string w = "witness:";
        for (const auto& cover : r.witness)
            w += " " + format_set(cover);
        s.report().lines.push_back(w);
    } else {
        s.report().lines.push_back("shortest: none");
    }
    return s.finish(out, r.answer);
}

inline int cmd_kernelize(const std::string& what, const Options& opt, const std::string& command, std::ostream& out) {
    Session s(opt, command);
    std::string text;
    if (what == "qsat") {
        const QDnfInstance inst = parse_qdnf(read_file(opt.input));
        s.report().lines.push_back("input " + qdnf_stats(inst));
        const QDnfInstance k = kernelize_qdnf(inst, s.backend(), s.ledger());
        s.report().lines.push_back("kernel " + qdnf_stats(k));
        text = serialize_qdnf(k);
    } else if (what == "cfvd") {
        const CfvdInstance inst = load_cfvd(opt, opt.input);
        s.report().lines.push_back("input " + graph_stats(inst));
        const CfvdInstance k = kernelize_cfvd(inst, s.backend(), s.ledger());
        s.report().lines.push_back("kernel " + graph_stats(k));
        text = dump_cfvd(k);
    } else {
        const DvcrInstance inst = load_dvcr(opt, opt.input);
        s.report().lines.push_back("input " + dvcr_stats(inst));
        const DvcrInstance k = kernelize_dvcr(inst, s.backend(), s.ledger());
        s.report().lines.push_back("kernel " + dvcr_stats(k));
        text = serialize_dvcr_bundle(k);
    }
    if (opt.output.empty())
        throw InvalidInstance("kernelize needs --out");
    write_file(opt.output, text);
    s.report().lines.push_back("written: " + opt.output);
    return s.finish(out, std::nullopt);
}

inline int cmd_compose(const std::string& what, const Options& opt, std::ostream& out) {
    std::string text;
    if (what == "qsat-or") {
        std::vector<QDnfInstance> inputs;
        for (const auto& path : opt.inputs)
            inputs.push_back(parse_qdnf(read_file(path)));
        text = serialize_qdnf(compose_qdnf_or(inputs));
    } else {
        std::vector<CfvdInstance> inputs;
        for (const auto& path : opt.inputs)
            inputs.push_back(load_cfvd(opt, path));
        text = dump_cfvd(compose_wcfvd_or(inputs));
    }
    if (opt.output.empty())
        out << text;
    else
        write_file(opt.output, text);
    return kExitYes;
}

inline int cmd_verify(const Options& opt, const std::string& command, std::ostream& out) {
    Session s(opt, command);
    bool all_ok = true, matched = false;
    for (const auto& suite : all_suites()) {
        if (opt.target != "all" && opt.target != suite.name)
            continue;
        matched = true;
        const SuiteResult r = suite.run(s.backend(), opt.seed);
        const char* tag = r.status == SuiteStatus::Pass ? "PASS" : r.status == SuiteStatus::Fail ? "FAIL" : "SKIP";
        std::string line = std::string(tag) + " " + r.name + ": " + r.detail;
        if (opt.timing) {
            std::ostringstream t;
            t << std::fixed << std::setprecision(3) << r.seconds;
            line += " [" + t.str() + " s]";
        }
        s.report().lines.push_back(line);
        all_ok = all_ok && r.ok();
    }
    if (!matched)
        throw InvalidInstance("unknown suite '" + opt.target + "'");
    s.finish(out, std::nullopt);
    return all_ok ? kExitYes : kExitNo;
}

inline int cmd_gen(const Options& opt, std::ostream& out) {
    std::string text;
    const std::string& family = opt.target;
    if (family == "qdnf") {
        auto v = parse_param_list(opt.shape.empty() ? "2,3,4,3" : opt.shape, 4, "n1,n2,terms,len");
        text = serialize_qdnf(gen_random_qdnf(v[0], v[1], v[2], v[3], opt.seed));
    } else if (family == "cfvd") {
        CfvdGenOptions g;
        g.weighted = opt.weighted;
        text = dump_cfvd(gen_random_cfvd(opt.seed, g));
    } else if (family == "dvcr") {
        text = serialize_dvcr_bundle(gen_random_dvcr(opt.seed));
    } else if (family == "gadget") {
        const CnfFormula phi = opt.input.empty() ? make_trivial_cnf(false) : parse_dimacs(read_file(opt.input));
        text = serialize_dvcr_bundle(gen_dvcr_from_cnf(phi));
    } else if (family == "cnf") {
        text = write_dimacs(crosscheck_cnf(opt.seed, 0));
    } else {
        throw InvalidInstance("unknown family '" + family + "' (qdnf, cfvd, dvcr, gadget, cnf)");
    }
    if (opt.output.empty())
        out << text;
    else
        write_file(opt.output, text);
    return kExitYes;
}

inline int cmd_report(const Options& opt, const std::string& command, std::ostream& out) {
    Session s(opt, command);
    const std::string text = read_file(opt.input);
    std::istringstream probe(text);
    std::string line;
    std::string kind;
    while (std::getline(probe, line)) {
        auto toks = detail::split_tokens(line);
        if (detail::is_comment_or_blank(toks))
            continue;
        kind = toks.size() >= 2 && toks[0] == "p" ? std::string(toks[1]) : "";
        break;
    }
    if (kind == "qdnf") {
        s.report().lines.push_back("format: qdnf");
        s.report().lines.push_back(qdnf_stats(parse_qdnf(text)));
    } else if (kind == "graph") {
        GraphDocument doc = parse_graph(text);
        s.report().lines.push_back("format: graph");
        CfvdInstance c{doc.graph, doc.params ? doc.params->first : 0, doc.params ? doc.params->second : 1,
                       doc.weighted || opt.weighted};
        s.report().lines.push_back(graph_stats(c));
        if (doc.params && c.graph.size() <= (opt.guard ? opt.guard : kDefaultCfvdGuard))
            s.report().lines.push_back("target cliques: " +
                                       std::to_string(count_k_cliques_bruteforce(c.graph, c.k, c.weighted, c.graph.size())));
    } else if (kind == "dvcr") {
        const DvcrInstance d = parse_dvcr_bundle(text);
        s.report().lines.push_back("format: dvcr");
        s.report().lines.push_back(dvcr_stats(d));
        std::size_t non_default = 0;
        for (auto [u, v] : d.spec.pairs())
            non_default += d.spec.at(u, v) == make_trivial_cnf(false) ? 0 : 1;
        s.report().lines.push_back("pairs: " + std::to_string(d.spec.pair_count()) + " candidate, " +
                                   std::to_string(non_default) + " given explicitly");
    } else if (kind == "cnf") {
        const CnfFormula cnf = parse_dimacs(text);
        s.report().lines.push_back("format: cnf");
        s.report().lines.push_back("size: " + std::to_string(cnf.variable_count()) + " variables, " +
                                   std::to_string(cnf.clauses().size()) + " clauses");
    } else {
        throw InvalidInstance("unrecognised header in '" + opt.input + "'");
    }
    return s.finish(out, std::nullopt);
}

/// SAT-competition output for one DIMACS file, using the builtin solver.
inline int cmd_sat(const Options& opt, std::ostream& out) {
    const CnfFormula cnf = parse_dimacs(read_file(opt.input));
    const auto model = solve_builtin(cnf);
    if (!model) {
        out << "s UNSATISFIABLE\n";
        return kExitNo;
    }
    out << "s SATISFIABLE\nv";
    for (Var v = 1; v <= cnf.variable_count(); ++v)
        out << ' ' << (*model->value(v) ? static_cast<long long>(v) : -static_cast<long long>(v));
    out << " 0\n";
    return kExitYes;
}

} // namespace cli

inline int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    cli::Options opt;
    CLI::App app{"Oracle-assisted kernelization workbench"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub, bool oracle) {
        if (oracle) {
            sub->add_option("--backend", opt.backend, "builtin | external")->capture_default_str();
            sub->add_option("--solver-cmd", opt.solver_cmd, "external solver command ({} = CNF path)");
            sub->add_option("--timeout", opt.timeout, "external solver timeout in seconds")->capture_default_str();
        }
        sub->add_option("--seed", opt.seed, "base seed")->capture_default_str();
        sub->add_flag("--timing", opt.timing, "append wall-clock time to the report");
    };

    struct Leaf {
        CLI::App* app;
        std::string group;
        std::string name;
    };
    std::vector<Leaf> leaves;

    auto* solve = app.add_subcommand("solve", "decide an instance");
    auto* kernelize = app.add_subcommand("kernelize", "write an equivalent kernel instance");
    for (auto* parent : {solve, kernelize}) {
        parent->require_subcommand(1);
        for (const char* what : {"qsat", "cfvd", "dvcr"}) {
            auto* leaf = parent->add_subcommand(what);
            leaf->add_option("--in", opt.input, "instance file")->required();
            if (parent == kernelize)
                leaf->add_option("--out", opt.output, "kernel output file")->required();
            leaf->add_option("--param", opt.param, "h,k (cfvd) or k,l (dvcr)");
            leaf->add_option("--guard", opt.guard, "brute-force size limit");
            leaf->add_flag("--weighted", opt.weighted, "treat the graph as vertex-weighted");
            if (parent == solve)
                leaf->add_option("--method", opt.method, "qsat: fptnp|brute|kernel; cfvd: search|brute|hitting-set|kernel");
            common(leaf, true);
            leaves.push_back({leaf, parent->get_name(), what});
        }
    }
    auto* compose = app.add_subcommand("compose", "OR-compose instances");
    compose->require_subcommand(1);
    for (const char* what : {"qsat-or", "wcfvd-or"}) {
        auto* leaf = compose->add_subcommand(what);
        leaf->add_option("--in", opt.inputs, "input instance files")->required()->expected(1, -1);
        leaf->add_option("--out", opt.output, "output file (default stdout)");
        leaf->add_option("--param", opt.param, "h,k override for every graph input");
        leaves.push_back({leaf, "compose", what});
    }
    auto* verify = app.add_subcommand("verify", "run brute-force equivalence suites");
    verify->add_option("suite", opt.target, "suite name or 'all'")->required();
    common(verify, true);
    leaves.push_back({verify, "verify", ""});
    auto* gen = app.add_subcommand("gen", "print a seeded instance");
    gen->add_option("family", opt.target, "qdnf | cfvd | dvcr | gadget | cnf")->required();
    gen->add_option("--out", opt.output, "output file (default stdout)");
    gen->add_option("--shape", opt.shape, "qdnf: n1,n2,terms,len");
    gen->add_option("--in", opt.input, "gadget: CNF for the a-d pair");
    gen->add_flag("--weighted", opt.weighted, "cfvd: vertex weights 1..3");
    common(gen, false);
    leaves.push_back({gen, "gen", ""});
    auto* report = app.add_subcommand("report", "summarise an instance file");
    report->add_option("--in", opt.input, "instance file")->required();
    report->add_option("--guard", opt.guard, "clique counting size limit");
    report->add_flag("--weighted", opt.weighted, "treat the graph as vertex-weighted");
    common(report, false);
    leaves.push_back({report, "report", ""});
    auto* sat = app.add_subcommand("sat", "builtin solver with SAT-competition output");
    sat->add_option("file", opt.input, "DIMACS CNF")->required();
    leaves.push_back({sat, "sat", ""});

    std::string command;
    for (int i = 1; i < argc; ++i)
        command += (i > 1 ? " " : "") + std::string(argv[i]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitYes : kExitUsage;
    }

    try {
        for (const auto& leaf : leaves) {
            if (!leaf.app->parsed())
                continue;
            if (leaf.group == "solve")
                return cli::cmd_solve(leaf.name, opt, command, out);
            if (leaf.group == "kernelize")
                return cli::cmd_kernelize(leaf.name, opt, command, out);
            if (leaf.group == "compose")
                return cli::cmd_compose(leaf.name, opt, out);
            if (leaf.group == "verify")
                return cli::cmd_verify(opt, command, out);
            if (leaf.group == "gen")
                return cli::cmd_gen(opt, out);
            if (leaf.group == "report")
                return cli::cmd_report(opt, command, out);
            if (leaf.group == "sat")
                return cli::cmd_sat(opt, out);
        }
        err << "error: no command given\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidInstance& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const GuardExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const OracleFailure& e) {
        err << "oracle failure: " << e.what() << "\n";
        return kExitOracle;
    } catch (const IntegrityError& e) {
        err << "oracle integrity error: " << e.what() << "\n";
        return kExitOracle;
    }
}

} // namespace oraclekit
