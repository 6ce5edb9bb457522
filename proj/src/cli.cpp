#include "qclp/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "qclp/check.hpp"
#include "qclp/grammar.hpp"
#include "qclp/parser.hpp"
#include "qclp/serialize.hpp"

namespace qclp {

namespace {

constexpr int kOk = 0;
constexpr int kNoAnswer = 1;
constexpr int kUsageError = 2;

struct Options {
    std::string program_path;
    std::string query;
    std::string sentence;
    int depth = 64;
    std::string epsilon = "0";
    std::string mode = "min";
    std::string strategy = "alphabeta";
    std::string format = "text";
    bool trace = false;
    bool best_only = false;
};

bool read_file(const std::string& path, std::string& out, std::ostream& err) {
    std::ifstream in(path);
    if (!in) {
        err << "error: cannot open '" << path << "'\n";
        return false;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

int report_diagnostics(const std::vector<Diagnostic>& diags, std::ostream& err) {
    for (const Diagnostic& d : diags) err << d.to_string() << "\n";
    return kUsageError;
}

bool build_search_options(const Options& o, SearchOptions& opts, std::ostream& err) {
    opts.depth_limit = o.depth;
    auto eps = parse_rational(o.epsilon);
    if (!eps || *eps < 0 || *eps >= 1) {
        err << "error: --epsilon must be a rational in [0,1)\n";
        return false;
    }
    opts.epsilon = *eps;
    opts.mode = o.mode == "product" ? CombinationMode::Product : CombinationMode::Min;
    opts.strategy = o.strategy == "exhaustive" ? Strategy::Exhaustive : Strategy::AlphaBeta;
    return true;
}

struct LoadedQuery {
    Program program;
    Query query;
};

int load_program_and_query(const Options& o, const SearchOptions& opts, LoadedQuery& lq,
                           std::ostream& err, bool need_query) {
    std::string text;
    if (!read_file(o.program_path, text, err)) return kUsageError;
    ParseResult parsed = parse_program(text, o.program_path);
    if (!parsed.ok()) return report_diagnostics(parsed.diagnostics, err);
    lq.program = std::move(parsed.program);
    lq.program.combination_mode = opts.mode;
    if (!need_query) return kOk;
    if (o.query.empty()) {
        err << "error: missing --query\n";
        return kUsageError;
    }
    QueryParse qp = parse_query(o.query, lq.program.signature);
    if (!qp.ok()) return report_diagnostics(qp.diagnostics, err);
    lq.query = normalize_goal(std::move(qp.atoms), std::move(qp.constraint), lq.program);
    return kOk;
}

void print_answer(const Options& o, const LoadedQuery& lq, const Answer& a,
                  std::ostream& out) {
    out << format_answer(a, lq.query.display_vars) << "\n";
    if (o.trace && a.proof) out << format_tree(*a.proof);
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
    SearchOptions opts;
    if (!build_search_options(o, opts, err)) return kUsageError;
    LoadedQuery lq;
    if (int rc = load_program_and_query(o, opts, lq, err, true); rc != kOk) return rc;

    SearchStats stats;
    std::vector<Answer> answers = enumerate_answers(lq.query, lq.program, opts, &stats);
    if (o.best_only && answers.size() > 1) answers.resize(1);

    if (o.format == "json") {
        Json j;
        j["answers"] = Json::array();
        for (const Answer& a : answers) j["answers"].push_back(answer_to_json(a, o.trace));
        j["nodes_expanded"] = stats.nodes_expanded;
        j["truncated"] = stats.truncated;
        out << j.dump(2) << "\n";
    } else {
        if (o.trace) {
            ProofNodePtr tree = expand_minmax(lq.query.goal, lq.program, opts);
            out << "min/max tree:\n" << format_tree(*tree);
        }
        for (const Answer& a : answers) print_answer(o, lq, a, out);
        if (answers.empty()) out << "no answers\n";
    }
    return answers.empty() ? kNoAnswer : kOk;
}

int cmd_best(const Options& o, std::ostream& out, std::ostream& err) {
    SearchOptions opts;
    if (!build_search_options(o, opts, err)) return kUsageError;
    LoadedQuery lq;
    if (int rc = load_program_and_query(o, opts, lq, err, true); rc != kOk) return rc;

    SearchStats stats;
    std::optional<Answer> best = best_proof(lq.query, lq.program, opts, stats);

    if (o.format == "json") {
        Json j;
        if (best) j["answer"] = answer_to_json(*best, o.trace);
        j["nodes_expanded"] = stats.nodes_expanded;
        j["truncated"] = stats.truncated;
        out << j.dump(2) << "\n";
    } else {
        if (best) {
            print_answer(o, lq, *best, out);
        } else {
            out << "no answers\n";
        }
        out << "nodes expanded: " << stats.nodes_expanded << "\n";
        if (stats.truncated) out << "search truncated at depth " << o.depth << "\n";
    }
    return best ? kOk : kNoAnswer;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
    SearchOptions opts;
    if (!build_search_options(o, opts, err)) return kUsageError;
    LoadedQuery lq;
    if (int rc = load_program_and_query(o, opts, lq, err, false); rc != kOk) return rc;

    MinimalModelResult result = minimal_model(lq.program);
    if (o.format == "json") {
        Json j;
        Json model = Json::object();
        for (const auto& [atom, v] : result.model.entries())
            model[atom.to_string()] = to_fraction_string(v);
        j["model"] = std::move(model);
        j["stabilized_at"] = result.trace.stabilized_at;
        out << j.dump(2) << "\n";
    } else {
        out << format_model(result.model);
    }
    return kOk;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
    SearchOptions opts;
    if (!build_search_options(o, opts, err)) return kUsageError;
    LoadedQuery lq;
    if (int rc = load_program_and_query(o, opts, lq, err, false); rc != kOk) return rc;

    AgreementReport report = check_agreement(lq.program);
    for (const GoalReport& g : report.goals) {
        out << g.goal.to_string() << ": " << (g.ok ? "pass" : "FAIL") << " (oracle "
            << to_fraction_string(g.oracle_value) << ", exhaustive "
            << to_fraction_string(g.exhaustive_value) << " in " << g.exhaustive_nodes
            << " nodes, alphabeta " << to_fraction_string(g.alphabeta_value) << " in "
            << g.alphabeta_nodes << " nodes)\n";
    }
    out << (report.ok() ? "all goals agree" : "disagreements found") << "\n";
    return report.ok() ? kOk : kNoAnswer;
}

int cmd_parse(const Options& o, std::ostream& out, std::ostream& err) {
    SearchOptions opts;
    if (!build_search_options(o, opts, err)) return kUsageError;
    std::string text;
    if (!read_file(o.program_path, text, err)) return kUsageError;
    GrammarParse gp = parse_grammar(text, o.program_path);
    if (!gp.ok()) return report_diagnostics(gp.diagnostics, err);
    CompiledGrammar grammar = compile_grammar(std::move(gp.rules));
    if (!grammar.diagnostics.empty()) return report_diagnostics(grammar.diagnostics, err);
    grammar.program.combination_mode = opts.mode;

    std::istringstream ss(o.sentence);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    if (tokens.empty()) {
        err << "error: missing or empty --sentence\n";
        return kUsageError;
    }

    std::vector<ParseAnalysis> analyses = parse_sentence(grammar, tokens, opts);
    if (o.format == "json") {
        Json j;
        j["analyses"] = Json::array();
        for (const ParseAnalysis& a : analyses) {
            Json ja;
            ja["tree"] = format_analysis(grammar, a, opts.mode);
            ja["value"] = to_fraction_string(a.value);
            ja["decimal"] = to_decimal_string(a.value);
            if (o.trace && a.proof) ja["proof"] = tree_to_json(*a.proof);
            j["analyses"].push_back(std::move(ja));
        }
        out << j.dump(2) << "\n";
    } else {
        for (const ParseAnalysis& a : analyses) {
            out << format_analysis(grammar, a, opts.mode) << " @ "
                << to_fraction_string(a.value) << " (" << to_decimal_string(a.value)
                << ")\n";
            if (o.trace && a.proof) out << format_tree(*a.proof);
        }
        if (analyses.empty()) out << "no parse\n";
    }
    return analyses.empty() ? kNoAnswer : kOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
    std::string text;
    if (!read_file(o.program_path, text, err)) return kUsageError;
    ParseResult parsed = parse_program(text, o.program_path);
    if (!parsed.ok()) {
        report_diagnostics(parsed.diagnostics, err);
        return kUsageError;
    }
    out << "ok: " << parsed.program.clauses.size() << " clauses\n";
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"quantitative constraint logic programming engine"};
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub, bool with_query) {
        sub->add_option("program", o.program_path, "program file")->required();
        if (with_query) sub->add_option("-q,--query", o.query, "query (clause-body syntax)");
        sub->add_option("--depth", o.depth, "depth limit in max-to-max units");
        sub->add_option("--epsilon", o.epsilon, "factor-product cutoff (decimal or p/q)");
        sub->add_option("--mode", o.mode, "combination mode")
            ->check(CLI::IsMember({"min", "product"}));
        sub->add_option("--strategy", o.strategy, "search strategy")
            ->check(CLI::IsMember({"exhaustive", "alphabeta"}));
        sub->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_flag("--trace", o.trace, "print proof trees");
    };

    bool all_flag = false;
    CLI::App* solve = app.add_subcommand("solve", "enumerate all answers");
    add_common(solve, true);
    solve->add_flag("--best", o.best_only, "print only the top answer");
    solve->add_flag("--all", all_flag, "print every answer (default)");
    CLI::App* best = app.add_subcommand("best", "best answer with search stats");
    add_common(best, true);
    CLI::App* oracle = app.add_subcommand("oracle", "minimal fuzzy model (function-free)");
    add_common(oracle, false);
    CLI::App* check = app.add_subcommand("check", "oracle/solver agreement per ground goal");
    add_common(check, false);
    CLI::App* parse = app.add_subcommand("parse", "parse a sentence with a weighted grammar");
    add_common(parse, false);
    parse->add_option("--sentence", o.sentence, "whitespace-separated tokens");
    CLI::App* validate_cmd = app.add_subcommand("validate", "validate a program file");
    validate_cmd->add_option("program", o.program_path, "program file")->required();

    std::vector<const char*> argv;
    argv.push_back("qclp");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help goes to out and is a success
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    if (all_flag) o.best_only = false;
    try {
        if (solve->parsed()) return cmd_solve(o, out, err);
        if (best->parsed()) return cmd_best(o, out, err);
        if (oracle->parsed()) return cmd_oracle(o, out, err);
        if (check->parsed()) return cmd_check(o, out, err);
        if (parse->parsed()) return cmd_parse(o, out, err);
        if (validate_cmd->parsed()) return cmd_validate(o, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace qclp
