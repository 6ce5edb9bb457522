#pragma once

#include "qclp/parser.hpp"
#include "qclp/solver.hpp"

namespace qclp {

/// One weighted phrase-structure rule. Right-hand-side items are category
/// symbols or quoted terminals.
struct WeightedRule {
    struct Item {
        std::string symbol;
        bool terminal = false;
    };
    std::string lhs;
    std::vector<Item> rhs;  // may be empty (epsilon rule)
    Factor weight;
    int line = 0;
};

struct GrammarParse {
    std::vector<WeightedRule> rules;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

/// One rule per line: `LHS -> RHS @ weight .` with terminals double-quoted,
/// `@ 1` and the final period omissible.
GrammarParse parse_grammar(std::string_view text, const std::string& file = "<grammar>");

/// Compiles rules into a quantitative program with the string threaded as a
/// difference list: rule i becomes clause i, categories become binary
/// relations, terminals consume one cons cell. Diagnostics report
/// categories that are referenced but never defined.
struct CompiledGrammar {
    Program program;
    std::vector<WeightedRule> rules;  // clause i corresponds to rules[i]
    std::string start;                // lhs of the first rule
    std::vector<Diagnostic> diagnostics;
};

CompiledGrammar compile_grammar(std::vector<WeightedRule> rules);

struct DerivationNode {
    size_t rule = 0;
    std::vector<DerivationNode> children;  // nonterminal subtrees, in rhs order
};

struct ParseAnalysis {
    DerivationNode tree;
    Rational value;
    HerbrandConstraint answer;
    ProofNodePtr proof;
};

/// All analyses of the token sequence, best value first.
std::vector<ParseAnalysis> parse_sentence(const CompiledGrammar& grammar,
                                          const std::vector<std::string>& tokens,
                                          const SearchOptions& opts);

/// Recomputes an analysis value bottom-up over the derivation tree. Used as
/// an independent check of solver values.
Rational derivation_value(const CompiledGrammar& grammar, const DerivationNode& node,
                          CombinationMode mode);

/// Bracketed rendering with per-node values, terminals quoted.
std::string format_analysis(const CompiledGrammar& grammar, const ParseAnalysis& analysis,
                            CombinationMode mode);

}  // namespace qclp
