#include "qclp/fixpoint.hpp"

#include <algorithm>
#include <cassert>

namespace qclp {

std::string GroundAtom::to_string() const {
    std::string out = relation;
    if (!args.empty()) {
        out += '(';
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) out += ", ";
            out += args[i];
        }
        out += ')';
    }
    return out;
}

Rational FuzzyInterpretation::value(const GroundAtom& atom) const {
    auto it = mu_.find(atom);
    return it == mu_.end() ? Rational(0) : it->second;
}

void FuzzyInterpretation::set(GroundAtom atom, Rational v) {
    assert(v >= 0 && v <= 1);
    if (v == 0) {
        mu_.erase(atom);
        return;
    }
    mu_[std::move(atom)] = std::move(v);
}

bool FuzzyInterpretation::pointwise_leq(const FuzzyInterpretation& other) const {
    for (const auto& [atom, v] : mu_)
        if (v > other.value(atom)) return false;
    return true;
}

bool operator==(const FuzzyInterpretation& a, const FuzzyInterpretation& b) {
    return a.mu_ == b.mu_;
}

namespace {

void require_function_free(const Program& prog) {
    for (const auto& [name, arity] : prog.signature.constructors)
        if (arity > 0)
            throw FragmentError("oracle requires a function-free program; '" + name +
                                "' has arity " + std::to_string(arity));
}

Rational aggregate(CombinationMode mode, const std::vector<Rational>& values) {
    Rational acc(1);  // inf of the empty set
    for (const Rational& v : values) {
        if (mode == CombinationMode::Min)
            acc = std::min(acc, v);
        else
            acc *= v;
    }
    return acc;
}

// Enumerates assignments of `vars` over `universe`, invoking fn for each.
// fn returns false to stop early.
template <typename Fn>
void for_each_assignment(const std::vector<Variable>& vars,
                         const std::vector<std::string>& universe, Fn&& fn) {
    if (vars.empty()) {
        fn(Assignment{});
        return;
    }
    if (universe.empty()) return;
    std::vector<size_t> odo(vars.size(), 0);
    while (true) {
        Assignment alpha;
        for (size_t i = 0; i < vars.size(); ++i) alpha[vars[i]] = universe[odo[i]];
        if (!fn(alpha)) return;
        size_t i = 0;
        for (; i < odo.size(); ++i) {
            if (++odo[i] < universe.size()) break;
            odo[i] = 0;
        }
        if (i == odo.size()) return;
    }
}

GroundTuple atom_tuple(const Atom& atom, const Assignment& alpha) {
    GroundTuple t;
    t.reserve(atom.args.size());
    for (Variable v : atom.args) t.push_back(alpha.at(v));
    return t;
}

}  // namespace

FuzzyInterpretation chain_step(const Program& prog, const FuzzyInterpretation& interp) {
    require_function_free(prog);
    const std::vector<std::string>& universe = interp.universe();
    FuzzyInterpretation next(universe);

    for (const QuantClause& clause : prog.clauses) {
        VarSet var_set = clause.vars();
        std::vector<Variable> vars(var_set.begin(), var_set.end());
        for_each_assignment(vars, universe, [&](const Assignment& alpha) {
            if (!satisfies(clause.constraint, alpha)) return true;
            std::vector<Rational> body_values;
            body_values.reserve(clause.body.size());
            for (const Atom& b : clause.body)
                body_values.push_back(interp.value({b.relation, atom_tuple(b, alpha)}));
            Rational candidate =
                clause.factor.value() * aggregate(prog.combination_mode, body_values);
            GroundAtom head{clause.head.relation, atom_tuple(clause.head, alpha)};
            if (candidate > next.value(head)) next.set(std::move(head), std::move(candidate));
            return true;
        });
    }
    return next;
}

MinimalModelResult minimal_model(const Program& prog, const OracleOptions& opts) {
    require_function_free(prog);
    std::set<std::string> universe_set;
    for (const std::string& c : prog.constants()) universe_set.insert(c);
    for (const std::string& c : opts.extra_constants) universe_set.insert(c);
    std::vector<std::string> universe(universe_set.begin(), universe_set.end());

    MinimalModelResult out;
    FuzzyInterpretation current(universe);
    out.trace.steps.push_back(current);
    for (size_t step = 0; step < opts.iteration_cap; ++step) {
        FuzzyInterpretation next = chain_step(prog, current);
        if (!current.pointwise_leq(next))
            throw Error("internal: chain step decreased a value");
        if (next == current) {
            out.trace.stabilized_at = step;
            out.model = std::move(current);
            return out;
        }
        current = std::move(next);
        out.trace.steps.push_back(current);
    }
    throw Error("oracle iteration cap (" + std::to_string(opts.iteration_cap) +
                ") exceeded before stabilization");
}

bool model_check(const Program& prog, const FuzzyInterpretation& interp) {
    require_function_free(prog);
    const std::vector<std::string>& universe = interp.universe();
    for (const QuantClause& clause : prog.clauses) {
        VarSet var_set = clause.vars();
        std::vector<Variable> vars(var_set.begin(), var_set.end());
        bool ok = true;
        for_each_assignment(vars, universe, [&](const Assignment& alpha) {
            if (!satisfies(clause.constraint, alpha)) return true;
            std::vector<Rational> body_values;
            for (const Atom& b : clause.body)
                body_values.push_back(interp.value({b.relation, atom_tuple(b, alpha)}));
            Rational required =
                clause.factor.value() * aggregate(prog.combination_mode, body_values);
            if (interp.value({clause.head.relation, atom_tuple(clause.head, alpha)}) <
                required) {
                ok = false;
                return false;
            }
            return true;
        });
        if (!ok) return false;
    }
    return true;
}

Rational consequence_value(const FuzzyInterpretation& interp, const Goal& goal,
                           const HerbrandConstraint& answer) {
    if (!goal.atom) throw Error("consequence_value requires a goal with an atom");
    const std::vector<std::string>& universe = interp.universe();

    VarSet var_set = goal.vars();
    for (Variable v : answer.variables()) var_set.insert(v);
    std::vector<Variable> vars(var_set.begin(), var_set.end());

    bool answer_satisfiable = false;
    bool any_solution = false;
    Rational best;
    for_each_assignment(vars, universe, [&](const Assignment& alpha) {
        if (!satisfies(answer, alpha)) return true;
        answer_satisfiable = true;
        if (!satisfies(goal.constraint, alpha)) return true;
        Rational v = interp.value({goal.atom->relation, atom_tuple(*goal.atom, alpha)});
        if (!any_solution || v < best) best = v;
        any_solution = true;
        return true;
    });
    if (!answer_satisfiable)
        throw Error("answer constraint has no solution over the universe");
    return any_solution ? best : Rational(0);
}

std::string format_model(const FuzzyInterpretation& interp) {
    std::string out;
    for (const auto& [atom, v] : interp.entries())
        out += atom.to_string() + " = " + to_fraction_string(v) + "\n";
    return out;
}

}  // namespace qclp
