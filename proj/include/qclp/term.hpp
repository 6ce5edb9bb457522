#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace qclp {

/// A logic variable. Identity is a globally unique id drawn from an atomic
/// supply; the optional source name is kept for display only.
class Variable {
public:
    static Variable fresh();
    static Variable fresh(const std::string& name);

    std::uint64_t id() const { return id_; }
    std::string name() const;

    friend bool operator==(Variable a, Variable b) { return a.id_ == b.id_; }
    friend auto operator<=>(Variable a, Variable b) { return a.id_ <=> b.id_; }

private:
    explicit Variable(std::uint64_t id) : id_(id) {}
    std::uint64_t id_;
};

using VarSet = std::set<Variable>;

/// A first-order term: a variable or a constructor application. Constants
/// are arity-0 constructors. Terms are immutable and cheaply shareable.
class Term {
public:
    explicit Term(Variable v);
    Term(std::string functor, std::vector<Term> args = {});

    bool is_var() const { return rep_->is_var; }
    Variable var() const;
    const std::string& functor() const { return rep_->functor; }
    const std::vector<Term>& args() const { return rep_->args; }

    void collect_vars(VarSet& out) const;
    VarSet vars() const;
    bool contains(Variable v) const;
    bool is_function_free() const;  // only variables and constants

    std::string to_string() const;

    friend bool operator==(const Term& a, const Term& b) { return structural_equal(a, b); }
    friend bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

private:
    struct Rep {
        bool is_var;
        Variable v;
        std::string functor;
        std::vector<Term> args;
    };
    static bool structural_equal(const Term& a, const Term& b);
    static int compare(const Term& a, const Term& b);
    std::shared_ptr<const Rep> rep_;
};

/// A finite, injective variable-to-variable map (identity elsewhere).
class Renaming {
public:
    Renaming() = default;

    /// Fails (returns false) if the addition would break injectivity.
    bool add(Variable from, Variable to);

    Variable apply(Variable v) const;
    Term apply(const Term& t) const;
    Renaming inverse() const;

    const std::map<Variable, Variable>& mapping() const { return map_; }

private:
    std::map<Variable, Variable> map_;
    std::set<Variable> range_;
};

Term substitute(const Term& t, const std::map<Variable, Term>& bindings);

}  // namespace qclp
