#include "qclp/grammar.hpp"

#include <cctype>
#include <sstream>

namespace qclp {

namespace {

// Line-oriented rule reader; trusts the shared term lexer conventions only
// for symbol shape (lowercase category names).
struct RuleLine {
    std::string text;
    int line;
};

std::vector<RuleLine> split_lines(std::string_view text) {
    std::vector<RuleLine> out;
    std::string current;
    int line = 1, start = 1;
    for (char c : text) {
        if (c == '\n') {
            out.push_back({current, start});
            current.clear();
            ++line;
            start = line;
        } else {
            current += c;
        }
    }
    if (!current.empty()) out.push_back({current, start});
    return out;
}

bool valid_category(const std::string& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

}  // namespace

GrammarParse parse_grammar(std::string_view text, const std::string& file) {
    GrammarParse out;
    auto error = [&](int line, int col, const std::string& msg) {
        out.diagnostics.push_back({file, line, col, Diagnostic::Severity::Error, msg});
    };

    for (const RuleLine& rl : split_lines(text)) {
        std::string body = rl.text;
        if (size_t pc = body.find('%'); pc != std::string::npos) body.resize(pc);
        // strip whitespace and an optional trailing period
        auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)); };
        while (!body.empty() && is_space(body.back())) body.pop_back();
        if (!body.empty() && body.back() == '.') body.pop_back();
        while (!body.empty() && is_space(body.back())) body.pop_back();
        size_t first = 0;
        while (first < body.size() && is_space(body[first])) ++first;
        body = body.substr(first);
        if (body.empty()) continue;

        size_t arrow = body.find("->");
        if (arrow == std::string::npos) {
            error(rl.line, 1, "expected 'LHS -> RHS' rule");
            continue;
        }
        std::string lhs = body.substr(0, arrow);
        while (!lhs.empty() && is_space(lhs.back())) lhs.pop_back();
        if (!valid_category(lhs)) {
            error(rl.line, 1, "malformed category '" + lhs + "'");
            continue;
        }

        std::string rest = body.substr(arrow + 2);
        Rational weight(1);
        if (size_t at = rest.rfind('@'); at != std::string::npos) {
            std::string wtext = rest.substr(at + 1);
            rest.resize(at);
            size_t ws = 0;
            while (ws < wtext.size() && is_space(wtext[ws])) ++ws;
            size_t we = wtext.size();
            while (we > ws && is_space(wtext[we - 1])) --we;
            auto w = parse_decimal(wtext.substr(ws, we - ws));
            if (!w) {
                error(rl.line, static_cast<int>(arrow + at + 3), "malformed weight");
                continue;
            }
            if (*w <= 0 || *w > 1) {
                error(rl.line, static_cast<int>(arrow + at + 3),
                      "weight " + wtext.substr(ws, we - ws) + " outside (0,1]");
                continue;
            }
            weight = *w;
        }

        WeightedRule rule;
        rule.lhs = lhs;
        rule.weight = Factor(weight);
        rule.line = rl.line;
        std::istringstream items(rest);
        std::string item;
        bool bad = false;
        while (items >> item) {
            if (item.size() >= 2 && item.front() == '"' && item.back() == '"') {
                rule.rhs.push_back({item.substr(1, item.size() - 2), true});
            } else if (valid_category(item)) {
                rule.rhs.push_back({item, false});
            } else {
                error(rl.line, 1, "malformed rule item '" + item + "'");
                bad = true;
                break;
            }
        }
        if (!bad) out.rules.push_back(std::move(rule));
    }
    if (out.rules.empty() && out.diagnostics.empty())
        error(1, 1, "grammar has no rules");
    return out;
}

CompiledGrammar compile_grammar(std::vector<WeightedRule> rules) {
    CompiledGrammar out;
    out.rules = std::move(rules);
    if (out.rules.empty()) {
        out.diagnostics.push_back(
            {"<grammar>", 1, 1, Diagnostic::Severity::Error, "grammar has no rules"});
        return out;
    }
    out.start = out.rules.front().lhs;

    std::set<std::string> defined;
    for (const WeightedRule& r : out.rules) defined.insert(r.lhs);
    for (const WeightedRule& r : out.rules)
        for (const WeightedRule::Item& item : r.rhs)
            if (!item.terminal && !defined.count(item.symbol))
                out.diagnostics.push_back({"<grammar>", r.line, 1,
                                           Diagnostic::Severity::Error,
                                           "category '" + item.symbol +
                                               "' referenced but never defined"});

    for (const WeightedRule& r : out.rules) {
        // c(S0, Sn) <-w x1(S0, S1) & ... ; terminals consume one list cell.
        std::vector<Variable> positions;
        positions.push_back(Variable::fresh("S0"));
        for (size_t i = 0; i < r.rhs.size(); ++i)
            positions.push_back(Variable::fresh("S" + std::to_string(i + 1)));

        QuantClause clause;
        clause.factor = r.weight;
        clause.line = r.line;
        clause.head.relation = r.lhs;
        Variable tail = positions.back();
        if (r.rhs.empty()) {
            // epsilon: head arguments must stay distinct, so equate them.
            tail = Variable::fresh("S1");
            clause.constraint.append({Term(positions[0]), Term(tail)});
        }
        clause.head.args = {positions[0], tail};
        for (size_t i = 0; i < r.rhs.size(); ++i) {
            const WeightedRule::Item& item = r.rhs[i];
            if (item.terminal) {
                clause.constraint.append(
                    {Term(positions[i]),
                     Term("cons", {Term(item.symbol), Term(positions[i + 1])})});
            } else {
                clause.body.push_back(Atom{item.symbol, {positions[i], positions[i + 1]}});
            }
        }
        out.program.clauses.push_back(std::move(clause));
        out.program.signature.relations.emplace(r.lhs, 2);
        for (const WeightedRule::Item& item : r.rhs)
            if (!item.terminal) out.program.signature.relations.emplace(item.symbol, 2);
    }
    out.program.signature.constructors.emplace("cons", 2);
    out.program.signature.constructors.emplace("nil", 0);
    for (const WeightedRule& r : out.rules)
        for (const WeightedRule::Item& item : r.rhs)
            if (item.terminal) out.program.signature.constructors.emplace(item.symbol, 0);
    return out;
}

namespace {

Term tokens_to_list(const std::vector<std::string>& tokens) {
    Term list("nil");
    for (auto it = tokens.rbegin(); it != tokens.rend(); ++it)
        list = Term("cons", {Term(*it), list});
    return list;
}

// A proof tree of the compiled program maps onto a derivation tree by
// reading clause ids off the min nodes; max-node children follow rhs order.
DerivationNode derivation_from_proof(const ProofNode& max_node) {
    if (max_node.children.size() != 1 || max_node.children[0]->kind != NodeKind::Min)
        throw Error("malformed proof tree for a parse");
    const ProofNode& min_node = *max_node.children[0];
    DerivationNode out;
    out.rule = *min_node.clause;
    for (const auto& child : min_node.children)
        if (child->kind == NodeKind::Max) out.children.push_back(derivation_from_proof(*child));
    return out;
}

}  // namespace

std::vector<ParseAnalysis> parse_sentence(const CompiledGrammar& grammar,
                                          const std::vector<std::string>& tokens,
                                          const SearchOptions& opts) {
    if (tokens.empty()) throw Error("parse_sentence requires a nonempty token list");
    Variable s = Variable::fresh("S");
    Variable e = Variable::fresh("E");
    HerbrandConstraint phi;
    phi.append({Term(s), tokens_to_list(tokens)});
    phi.append({Term(e), Term("nil")});
    Query query = make_query(Goal{Atom{grammar.start, {s, e}}, std::move(phi)});

    std::vector<ParseAnalysis> out;
    for (const Answer& a : enumerate_answers(query, grammar.program, opts)) {
        ParseAnalysis analysis;
        // Root max node wraps the start-category proof.
        analysis.tree = derivation_from_proof(*a.proof);
        analysis.value = a.value;
        analysis.answer = a.constraint;
        analysis.proof = a.proof;
        out.push_back(std::move(analysis));
    }
    return out;
}

Rational derivation_value(const CompiledGrammar& grammar, const DerivationNode& node,
                          CombinationMode mode) {
    Rational agg(1);
    for (const DerivationNode& c : node.children) {
        Rational v = derivation_value(grammar, c, mode);
        agg = mode == CombinationMode::Min ? std::min(agg, v) : Rational(agg * v);
    }
    return grammar.rules[node.rule].weight.value() * agg;
}

namespace {

void format_analysis_rec(const CompiledGrammar& grammar, const DerivationNode& node,
                         CombinationMode mode, std::string& out) {
    const WeightedRule& rule = grammar.rules[node.rule];
    out += "[" + rule.lhs + ":" +
           to_fraction_string(derivation_value(grammar, node, mode));
    size_t next_child = 0;
    for (const WeightedRule::Item& item : rule.rhs) {
        out += " ";
        if (item.terminal) {
            out += "\"" + item.symbol + "\"";
        } else {
            format_analysis_rec(grammar, node.children[next_child++], mode, out);
        }
    }
    out += "]";
}

}  // namespace

std::string format_analysis(const CompiledGrammar& grammar, const ParseAnalysis& analysis,
                            CombinationMode mode) {
    std::string out;
    format_analysis_rec(grammar, analysis.tree, mode, out);
    return out;
}

}  // namespace qclp
