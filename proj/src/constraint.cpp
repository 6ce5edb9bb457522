#include "qclp/constraint.hpp"

#include <algorithm>
#include <cassert>

namespace qclp {

HerbrandConstraint HerbrandConstraint::bottom() {
    HerbrandConstraint c;
    c.status_ = Status::Unsat;
    return c;
}

HerbrandConstraint HerbrandConstraint::of_equations(std::vector<Equation> eqs) {
    HerbrandConstraint c;
    c.status_ = Status::Unsolved;
    c.equations_ = std::move(eqs);
    return c;
}

HerbrandConstraint HerbrandConstraint::solved_form(std::vector<Equation> eqs) {
    HerbrandConstraint c;
    c.status_ = Status::Solved;
    c.equations_ = std::move(eqs);
    return c;
}

const Term* HerbrandConstraint::binding(Variable v) const {
    assert(status_ == Status::Solved);
    for (const Equation& eq : equations_)
        if (eq.lhs.is_var() && eq.lhs.var() == v) return &eq.rhs;
    return nullptr;
}

VarSet HerbrandConstraint::variables() const {
    VarSet out;
    for (const Equation& eq : equations_) {
        eq.lhs.collect_vars(out);
        eq.rhs.collect_vars(out);
    }
    return out;
}

void HerbrandConstraint::append(const Equation& eq) {
    if (status_ == Status::Unsat) return;
    status_ = Status::Unsolved;
    equations_.push_back(eq);
}

void HerbrandConstraint::append_all(const HerbrandConstraint& other) {
    if (other.status_ == Status::Unsat) {
        status_ = Status::Unsat;
        equations_.clear();
        return;
    }
    for (const Equation& eq : other.equations_) append(eq);
}

std::string HerbrandConstraint::to_string() const {
    if (status_ == Status::Unsat) return "false";
    if (equations_.empty()) return "true";
    std::string out;
    for (size_t i = 0; i < equations_.size(); ++i) {
        if (i) out += " & ";
        out += equations_[i].lhs.to_string() + " = " + equations_[i].rhs.to_string();
    }
    return out;
}

bool operator==(const HerbrandConstraint& a, const HerbrandConstraint& b) {
    if (a.status_ != b.status_ || a.equations_.size() != b.equations_.size()) return false;
    for (size_t i = 0; i < a.equations_.size(); ++i)
        if (!(a.equations_[i].lhs == b.equations_[i].lhs) ||
            !(a.equations_[i].rhs == b.equations_[i].rhs))
            return false;
    return true;
}

namespace {

// Unification working state: a (not yet idempotent) binding map.
struct Unifier {
    std::map<Variable, Term> bindings;

    // Follows variable bindings at the root until unbound or non-var.
    Term walk(Term t) const {
        while (t.is_var()) {
            auto it = bindings.find(t.var());
            if (it == bindings.end()) return t;
            t = it->second;
        }
        return t;
    }

    bool occurs(Variable v, const Term& t) const {
        Term w = walk(t);
        if (w.is_var()) return w.var() == v;
        for (const Term& a : w.args())
            if (occurs(v, a)) return true;
        return false;
    }

    bool unify(const Term& a, const Term& b) {
        Term x = walk(a);
        Term y = walk(b);
        if (x.is_var() && y.is_var()) {
            if (x.var() == y.var()) return true;
            // Older id on the left of the final solved form.
            if (x.var() < y.var())
                bindings.emplace(x.var(), y);
            else
                bindings.emplace(y.var(), x);
            return true;
        }
        if (x.is_var() || y.is_var()) {
            Variable v = x.is_var() ? x.var() : y.var();
            const Term& t = x.is_var() ? y : x;
            if (occurs(v, t)) return false;
            bindings.emplace(v, t);
            return true;
        }
        if (x.functor() != y.functor()) return false;
        if (x.args().size() != y.args().size())
            throw ArityError("constructor '" + x.functor() + "' used with arities " +
                             std::to_string(x.args().size()) + " and " +
                             std::to_string(y.args().size()));
        for (size_t i = 0; i < x.args().size(); ++i)
            if (!unify(x.args()[i], y.args()[i])) return false;
        return true;
    }

    Term resolve_deep(const Term& t) const {
        Term w = walk(t);
        if (w.is_var()) return w;
        std::vector<Term> args;
        args.reserve(w.args().size());
        for (const Term& a : w.args()) args.push_back(resolve_deep(a));
        return Term(w.functor(), std::move(args));
    }
};

}  // namespace

HerbrandConstraint solve(const HerbrandConstraint& phi) {
    if (phi.status() != HerbrandConstraint::Status::Unsolved) return phi;
    Unifier u;
    for (const Equation& eq : phi.equations())
        if (!u.unify(eq.lhs, eq.rhs)) return HerbrandConstraint::bottom();
    std::vector<Equation> solved;
    solved.reserve(u.bindings.size());
    for (const auto& [v, t] : u.bindings) {
        Term rhs = u.resolve_deep(t);
        if (rhs.is_var() && rhs.var() == v) continue;
        solved.push_back({Term(v), rhs});
    }
    return HerbrandConstraint::solved_form(std::move(solved));
}

HerbrandConstraint conjoin_project(const HerbrandConstraint& phi,
                                   const HerbrandConstraint& phi2,
                                   const VarSet& keep) {
    HerbrandConstraint combined = phi;
    if (combined.is_unsat() || phi2.is_unsat()) return HerbrandConstraint::bottom();
    combined.append_all(phi2);
    HerbrandConstraint s = solve(combined);
    if (s.is_unsat()) return s;

    // Kept bindings in solved order.
    std::vector<Equation> kept;
    std::map<Variable, int> foreign_count;
    for (const Equation& eq : s.equations()) {
        if (!keep.count(eq.lhs.var())) continue;
        kept.push_back(eq);
        for (Variable v : eq.rhs.vars())
            if (!keep.count(v)) ++foreign_count[v];
    }
    // A binding to a lone placeholder carries no information; drop it.
    std::vector<Equation> informative;
    for (const Equation& eq : kept) {
        if (eq.rhs.is_var() && !keep.count(eq.rhs.var()) && foreign_count[eq.rhs.var()] == 1)
            continue;
        informative.push_back(eq);
    }
    // Canonical placeholder renaming, left-to-right first occurrence order.
    std::map<Variable, Variable> placeholders;
    std::map<Variable, Term> renaming;
    auto number_vars = [&](const Term& t, auto&& self) -> void {
        if (t.is_var()) {
            Variable v = t.var();
            if (keep.count(v) || placeholders.count(v)) return;
            Variable ph = Variable::fresh("_" + std::to_string(placeholders.size() + 1));
            placeholders.emplace(v, ph);
            renaming.emplace(v, Term(ph));
            return;
        }
        for (const Term& a : t.args()) self(a, self);
    };
    auto rename = [&](const Term& t) {
        number_vars(t, number_vars);
        return substitute(t, renaming);
    };
    std::vector<Equation> out;
    out.reserve(informative.size());
    for (const Equation& eq : informative) out.push_back({eq.lhs, rename(eq.rhs)});
    return HerbrandConstraint::solved_form(std::move(out));
}

Renaming rename_apart(const VarSet& vars, const VarSet& avoid) {
    Renaming rho;
    for (Variable v : vars) {
        Variable nv = Variable::fresh(v.name() + "'");
        assert(!avoid.count(nv));
        rho.add(v, nv);
    }
    (void)avoid;
    return rho;
}

std::vector<Assignment> enumerate_solutions(const HerbrandConstraint& phi,
                                            const VarSet& vars,
                                            const std::vector<std::string>& universe) {
    if (phi.is_unsat()) return {};
    for (const Equation& eq : phi.equations())
        if (!eq.lhs.is_function_free() || !eq.rhs.is_function_free())
            throw FragmentError("enumerate_solutions requires function-free constraints");

    VarSet all = vars;
    for (Variable v : phi.variables()) all.insert(v);
    std::vector<Variable> order(all.begin(), all.end());

    std::vector<Assignment> result;
    std::set<Assignment> seen;
    if (order.empty()) {
        Assignment empty;
        if (satisfies(phi, empty)) result.push_back(empty);
        return result;
    }
    if (universe.empty()) return result;

    std::vector<size_t> odo(order.size(), 0);
    while (true) {
        Assignment alpha;
        for (size_t i = 0; i < order.size(); ++i) alpha[order[i]] = universe[odo[i]];
        if (satisfies(phi, alpha)) {
            Assignment restricted;
            for (Variable v : vars) restricted[v] = alpha[v];
            if (seen.insert(restricted).second) result.push_back(std::move(restricted));
        }
        size_t i = 0;
        for (; i < odo.size(); ++i) {
            if (++odo[i] < universe.size()) break;
            odo[i] = 0;
        }
        if (i == odo.size()) break;
    }
    return result;
}

bool satisfies(const HerbrandConstraint& phi, const Assignment& alpha) {
    if (phi.is_unsat()) return false;
    auto ground = [&](const Term& t) -> const std::string* {
        if (t.is_var()) {
            auto it = alpha.find(t.var());
            return it == alpha.end() ? nullptr : &it->second;
        }
        return t.args().empty() ? &t.functor() : nullptr;
    };
    for (const Equation& eq : phi.equations()) {
        const std::string* l = ground(eq.lhs);
        const std::string* r = ground(eq.rhs);
        if (!l || !r || *l != *r) return false;
    }
    return true;
}

}  // namespace qclp
