#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qclp/constraint.hpp"
#include "qclp/rational.hpp"
#include "qclp/term.hpp"

namespace qclp {

/// A relational atom in normalized form: arguments are pairwise distinct
/// variables matching the relation's declared arity.
struct Atom {
    std::string relation;
    std::vector<Variable> args;

    VarSet vars() const { return VarSet(args.begin(), args.end()); }
    std::string to_string() const;
};

/// Clause weight, restricted to (0, 1].
class Factor {
public:
    Factor() : value_(1) {}
    explicit Factor(Rational v);

    const Rational& value() const { return value_; }

    friend bool operator==(const Factor& a, const Factor& b) { return a.value_ == b.value_; }

private:
    Rational value_;
};

struct QuantClause {
    Atom head;
    Factor factor;
    HerbrandConstraint constraint;
    std::vector<Atom> body;
    int line = 0;  // source position, 0 for synthesized clauses

    VarSet vars() const;
    std::string to_string() const;
};

enum class CombinationMode { Min, Product };

/// Declared arities, fixed by first use.
struct Signature {
    std::map<std::string, size_t> relations;
    std::map<std::string, size_t> constructors;
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    std::string file;
    int line = 0;
    int column = 0;
    Severity severity = Severity::Error;
    std::string message;

    std::string to_string() const;
};

class Program {
public:
    std::vector<QuantClause> clauses;
    Signature signature;
    CombinationMode combination_mode = CombinationMode::Min;

    /// Constants (arity-0 constructors) used anywhere in the program.
    std::vector<std::string> constants() const;

    /// Clauses whose head matches the relation/arity.
    std::vector<size_t> clauses_for(const std::string& relation, size_t arity) const;

    bool is_function_free() const;

    std::string to_string() const;
};

/// A normalized goal: at most one relational atom plus a constraint.
struct Goal {
    std::optional<Atom> atom;
    HerbrandConstraint constraint;

    VarSet vars() const;
    std::string to_string() const;
};

/// A goal paired with the query variables answers are reported over, in
/// source order.
struct Query {
    Goal goal;
    std::vector<Variable> display_vars;
};

/// Raw (pre-normalization) syntax: atom arguments are arbitrary terms.
struct RawAtom {
    std::string relation;
    std::vector<Term> args;
    int line = 0;
    int column = 0;
};

struct RawClause {
    RawAtom head;
    Factor factor;
    std::vector<Equation> equations;
    std::vector<RawAtom> body;
    int line = 0;
};

/// Flattens non-variable and repeated atom arguments into fresh variables
/// with defining equations, preserving the clause's solution semantics.
QuantClause normalize_clause(const RawClause& raw);

/// Restricts a (possibly compound) goal to the single-atom form. Compound
/// goals extend the program with a factor-1 clause over a fresh relation
/// whose arguments are all variables of the goal.
Query normalize_goal(std::vector<RawAtom> atoms, HerbrandConstraint phi, Program& prog);

std::vector<Diagnostic> validate(const Program& prog);

/// Structural equality up to renaming of clause-local variables.
bool structurally_equal(const Program& a, const Program& b);

}  // namespace qclp
