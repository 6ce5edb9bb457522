#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qclp/term.hpp"

namespace qclp {

struct Equation {
    Term lhs;
    Term rhs;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Same constructor symbol used at two different arities. Callers are
/// expected to validate programs up front; hitting this in a solve is a
/// usage error, not unsatisfiability.
class ArityError : public Error {
public:
    using Error::Error;
};

/// Input outside the function-free oracle fragment.
class FragmentError : public Error {
public:
    using Error::Error;
};

/// A conjunction of term equations. In Solved status the equations form an
/// idempotent binding set: left-hand sides are pairwise distinct variables,
/// ordered by id, none of which occurs in any right-hand side.
class HerbrandConstraint {
public:
    enum class Status { Unsolved, Solved, Unsat };

    HerbrandConstraint() : status_(Status::Solved) {}  // empty conjunction

    static HerbrandConstraint top() { return HerbrandConstraint(); }
    static HerbrandConstraint bottom();
    static HerbrandConstraint of_equations(std::vector<Equation> eqs);

    /// Wraps equations already known to be an idempotent binding set.
    static HerbrandConstraint solved_form(std::vector<Equation> eqs);

    Status status() const { return status_; }
    bool is_unsat() const { return status_ == Status::Unsat; }
    bool is_solved() const { return status_ == Status::Solved; }
    const std::vector<Equation>& equations() const { return equations_; }

    /// Binding lookup; solved constraints only. Null when unbound.
    const Term* binding(Variable v) const;

    /// V(phi): every variable occurring in the constraint.
    VarSet variables() const;

    void append(const Equation& eq);
    void append_all(const HerbrandConstraint& other);

    std::string to_string() const;

    friend bool operator==(const HerbrandConstraint& a, const HerbrandConstraint& b);

private:
    Status status_;
    std::vector<Equation> equations_;
};

/// Syntactic unification with occurs check. Returns a solved form with the
/// same solution set, or an unsatisfiable constraint. Deterministic: solved
/// equations are oriented with the older variable id on the left and sorted
/// by left-hand variable.
HerbrandConstraint solve(const HerbrandConstraint& phi);

/// Solves phi & phi2 and restricts the result to `keep`: a binding X -> t
/// survives iff X is in `keep`; variables of t outside `keep` become
/// canonical existential placeholders (_1, _2, ... in first-occurrence
/// order). Placeholders bound to nothing else are dropped entirely.
HerbrandConstraint conjoin_project(const HerbrandConstraint& phi,
                                   const HerbrandConstraint& phi2,
                                   const VarSet& keep);

/// A renaming of `vars` to fresh variables disjoint from `avoid` and from
/// previously issued ids.
Renaming rename_apart(const VarSet& vars, const VarSet& avoid);

using Assignment = std::map<Variable, std::string>;

/// Brute-force solutions of a function-free constraint over a finite
/// universe of constants, restricted to `vars`. Oracle fragment only.
std::vector<Assignment> enumerate_solutions(const HerbrandConstraint& phi,
                                            const VarSet& vars,
                                            const std::vector<std::string>& universe);

/// True iff the ground equations of phi all hold under the assignment.
/// Function-free fragment; variables missing from alpha fail the equation.
bool satisfies(const HerbrandConstraint& phi, const Assignment& alpha);

}  // namespace qclp
