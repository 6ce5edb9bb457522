#include "qclp/program.hpp"

#include <algorithm>
#include <set>

namespace qclp {

std::string Atom::to_string() const {
    std::string out = relation;
    if (!args.empty()) {
        out += '(';
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) out += ", ";
            out += args[i].name();
        }
        out += ')';
    }
    return out;
}

Factor::Factor(Rational v) : value_(std::move(v)) {
    if (value_ <= 0 || value_ > 1)
        throw Error("factor " + to_fraction_string(value_) + " outside (0,1]");
}

VarSet QuantClause::vars() const {
    VarSet out = head.vars();
    for (Variable v : constraint.variables()) out.insert(v);
    for (const Atom& a : body)
        for (Variable v : a.args) out.insert(v);
    return out;
}

namespace {

std::string factor_literal(const Rational& f) {
    // Parser accepts decimals; emit one when the denominator divides 10^9.
    mpz_class billion;
    mpz_ui_pow_ui(billion.get_mpz_t(), 10, 9);
    if (billion % f.get_den() == 0) {
        std::string s = to_decimal_string(f, 9);
        while (s.size() > 1 && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }
    return to_fraction_string(f);
}

}  // namespace

std::string QuantClause::to_string() const {
    std::string out = head.to_string();
    std::vector<std::string> items;
    for (const Equation& eq : constraint.equations())
        items.push_back(eq.lhs.to_string() + " = " + eq.rhs.to_string());
    for (const Atom& a : body) items.push_back(a.to_string());
    bool unit_factor = factor.value() == 1;
    if (items.empty()) {
        if (unit_factor) return out + ".";
        return out + " <- " + factor_literal(factor.value()) + ".";
    }
    out += " <- ";
    if (!unit_factor) out += factor_literal(factor.value()) + " : ";
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += " & ";
        out += items[i];
    }
    return out + ".";
}

std::string Diagnostic::to_string() const {
    std::string sev = severity == Severity::Error ? "error" : "warning";
    return file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + sev + ": " +
           message;
}

std::vector<std::string> Program::constants() const {
    std::set<std::string> out;
    auto scan = [&](const Term& t, auto&& self) -> void {
        if (t.is_var()) return;
        if (t.args().empty()) out.insert(t.functor());
        for (const Term& a : t.args()) self(a, self);
    };
    for (const QuantClause& c : clauses)
        for (const Equation& eq : c.constraint.equations()) {
            scan(eq.lhs, scan);
            scan(eq.rhs, scan);
        }
    return {out.begin(), out.end()};
}

std::vector<size_t> Program::clauses_for(const std::string& relation, size_t arity) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < clauses.size(); ++i)
        if (clauses[i].head.relation == relation && clauses[i].head.args.size() == arity)
            out.push_back(i);
    return out;
}

bool Program::is_function_free() const {
    for (const auto& [name, arity] : signature.constructors)
        if (arity > 0) return false;
    return true;
}

std::string Program::to_string() const {
    std::string out;
    for (const QuantClause& c : clauses) out += c.to_string() + "\n";
    return out;
}

VarSet Goal::vars() const {
    VarSet out = constraint.variables();
    if (atom)
        for (Variable v : atom->args) out.insert(v);
    return out;
}

std::string Goal::to_string() const {
    if (!atom) return constraint.to_string();
    if (constraint.equations().empty() && !constraint.is_unsat()) return atom->to_string();
    return atom->to_string() + " & " + constraint.to_string();
}

namespace {

Atom flatten_atom(const RawAtom& raw, std::vector<Equation>& extra) {
    Atom atom{raw.relation, {}};
    std::set<Variable> seen;
    for (const Term& arg : raw.args) {
        if (arg.is_var() && !seen.count(arg.var())) {
            atom.args.push_back(arg.var());
            seen.insert(arg.var());
            continue;
        }
        Variable fresh = Variable::fresh();
        atom.args.push_back(fresh);
        seen.insert(fresh);
        extra.push_back({Term(fresh), arg});
    }
    return atom;
}

}  // namespace

QuantClause normalize_clause(const RawClause& raw) {
    QuantClause out;
    out.factor = raw.factor;
    out.line = raw.line;
    std::vector<Equation> extra;
    out.head = flatten_atom(raw.head, extra);
    for (const RawAtom& a : raw.body) out.body.push_back(flatten_atom(a, extra));
    std::vector<Equation> eqs = std::move(extra);
    eqs.insert(eqs.end(), raw.equations.begin(), raw.equations.end());
    out.constraint = HerbrandConstraint::of_equations(std::move(eqs));
    return out;
}

Query normalize_goal(std::vector<RawAtom> atoms, HerbrandConstraint phi, Program& prog) {
    // Display variables: first occurrence order across atoms then constraint.
    std::vector<Variable> display;
    std::set<Variable> seen;
    auto note = [&](Variable v) {
        if (seen.insert(v).second) display.push_back(v);
    };
    for (const RawAtom& a : atoms)
        for (const Term& t : a.args)
            for (Variable v : t.vars()) note(v);
    for (const Equation& eq : phi.equations()) {
        for (Variable v : eq.lhs.vars()) note(v);
        for (Variable v : eq.rhs.vars()) note(v);
    }

    if (atoms.empty() || phi.is_unsat())
        return {Goal{std::nullopt, phi.is_unsat() ? HerbrandConstraint::bottom() : std::move(phi)},
                std::move(display)};

    if (atoms.size() == 1) {
        std::vector<Equation> extra;
        Atom atom = flatten_atom(atoms[0], extra);
        for (const Equation& eq : extra) phi.append(eq);
        return {Goal{std::move(atom), std::move(phi)}, std::move(display)};
    }

    // Compound goal: add goalN(all goal variables) <-1 atoms & phi.
    std::string fresh_name = "goal0";
    for (int i = 0; prog.signature.relations.count(fresh_name); ++i)
        fresh_name = "goal" + std::to_string(i + 1);

    RawClause clause;
    clause.factor = Factor();
    std::vector<Term> head_args;
    for (Variable v : display) head_args.push_back(Term(v));
    clause.head = RawAtom{fresh_name, head_args, 0, 0};
    clause.body = std::move(atoms);
    for (const Equation& eq : phi.equations()) clause.equations.push_back(eq);
    prog.clauses.push_back(normalize_clause(clause));
    prog.signature.relations[fresh_name] = head_args.size();

    Atom query_atom{fresh_name, display};
    return {Goal{std::move(query_atom), HerbrandConstraint::top()}, display};
}

std::vector<Diagnostic> validate(const Program& prog) {
    std::vector<Diagnostic> out;
    auto error = [&](int line, const std::string& msg) {
        out.push_back({"", line, 1, Diagnostic::Severity::Error, msg});
    };
    std::map<std::string, size_t> rel_arity = prog.signature.relations;
    std::map<std::string, size_t> con_arity;

    auto check_term = [&](const Term& t, int line, auto&& self) -> void {
        if (t.is_var()) return;
        auto [it, inserted] = con_arity.emplace(t.functor(), t.args().size());
        if (!inserted && it->second != t.args().size())
            error(line, "constructor '" + t.functor() + "' used with arity " +
                            std::to_string(t.args().size()) + " after arity " +
                            std::to_string(it->second));
        for (const Term& a : t.args()) self(a, line, self);
    };
    auto check_atom = [&](const Atom& a, int line) {
        auto [it, inserted] = rel_arity.emplace(a.relation, a.args.size());
        if (!inserted && it->second != a.args.size())
            error(line, "relation '" + a.relation + "' used with arity " +
                            std::to_string(a.args.size()) + " after arity " +
                            std::to_string(it->second));
        std::set<Variable> seen;
        for (Variable v : a.args)
            if (!seen.insert(v).second)
                error(line, "atom argument variables must be pairwise distinct in '" +
                                a.relation + "'");
    };

    for (const QuantClause& c : prog.clauses) {
        if (c.factor.value() <= 0 || c.factor.value() > 1)
            error(c.line, "factor " + to_fraction_string(c.factor.value()) + " outside (0,1]");
        check_atom(c.head, c.line);
        for (const Atom& a : c.body) check_atom(a, c.line);
        for (const Equation& eq : c.constraint.equations()) {
            check_term(eq.lhs, c.line, check_term);
            check_term(eq.rhs, c.line, check_term);
        }
    }
    return out;
}

namespace {

// Variable bijection accumulated while walking two clauses in step.
struct VarMatch {
    std::map<Variable, Variable> fwd, bwd;
    bool match(Variable a, Variable b) {
        auto f = fwd.find(a);
        auto g = bwd.find(b);
        if (f == fwd.end() && g == bwd.end()) {
            fwd.emplace(a, b);
            bwd.emplace(b, a);
            return true;
        }
        return f != fwd.end() && g != bwd.end() && f->second == b && g->second == a;
    }
    bool match(const Term& a, const Term& b) {
        if (a.is_var() != b.is_var()) return false;
        if (a.is_var()) return match(a.var(), b.var());
        if (a.functor() != b.functor() || a.args().size() != b.args().size()) return false;
        for (size_t i = 0; i < a.args().size(); ++i)
            if (!match(a.args()[i], b.args()[i])) return false;
        return true;
    }
};

bool clause_equal(const QuantClause& a, const QuantClause& b) {
    if (!(a.factor == b.factor)) return false;
    if (a.head.relation != b.head.relation || a.head.args.size() != b.head.args.size())
        return false;
    if (a.body.size() != b.body.size()) return false;
    if (a.constraint.equations().size() != b.constraint.equations().size()) return false;
    VarMatch m;
    for (size_t i = 0; i < a.head.args.size(); ++i)
        if (!m.match(a.head.args[i], b.head.args[i])) return false;
    for (size_t i = 0; i < a.constraint.equations().size(); ++i) {
        if (!m.match(a.constraint.equations()[i].lhs, b.constraint.equations()[i].lhs))
            return false;
        if (!m.match(a.constraint.equations()[i].rhs, b.constraint.equations()[i].rhs))
            return false;
    }
    for (size_t i = 0; i < a.body.size(); ++i) {
        if (a.body[i].relation != b.body[i].relation) return false;
        if (a.body[i].args.size() != b.body[i].args.size()) return false;
        for (size_t j = 0; j < a.body[i].args.size(); ++j)
            if (!m.match(a.body[i].args[j], b.body[i].args[j])) return false;
    }
    return true;
}

}  // namespace

bool structurally_equal(const Program& a, const Program& b) {
    if (a.clauses.size() != b.clauses.size()) return false;
    for (size_t i = 0; i < a.clauses.size(); ++i)
        if (!clause_equal(a.clauses[i], b.clauses[i])) return false;
    return true;
}

}  // namespace qclp
