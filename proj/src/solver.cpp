#include "qclp/solver.hpp"

#include <algorithm>
#include <cassert>

namespace qclp {

namespace {

Rational agg_combine(CombinationMode mode, const Rational& a, const Rational& b) {
    if (mode == CombinationMode::Min) return std::min(a, b);
    Rational r = a * b;
    return r;
}

std::string goal_label(const Atom& atom, const HerbrandConstraint& store) {
    if (store.equations().empty() && !store.is_unsat()) return atom.to_string();
    return atom.to_string() + " & " + store.to_string();
}

// "<clause constraint> & <body atoms> & <goal constraint>", mirroring the
// resolvent F & G of the reduction step.
std::string resolvent_label(const HerbrandConstraint& goal_constraint, const Resolvent& res) {
    std::vector<std::string> parts;
    for (const Equation& eq : res.clause_constraint.equations())
        parts.push_back(eq.lhs.to_string() + " = " + eq.rhs.to_string());
    for (const Atom& a : res.atoms) parts.push_back(a.to_string());
    for (const Equation& eq : goal_constraint.equations())
        parts.push_back(eq.lhs.to_string() + " = " + eq.rhs.to_string());
    if (parts.empty()) return "true";
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += " & ";
        out += parts[i];
    }
    return out;
}

ProofNodePtr make_node(NodeKind kind, Rational value, std::string label,
                       std::vector<ProofNodePtr> children = {},
                       std::optional<size_t> clause = std::nullopt, bool truncated = false) {
    return std::make_shared<ProofNode>(
        ProofNode{kind, std::move(value), truncated, clause, std::move(label),
                  std::move(children)});
}

}  // namespace

Resolvent reduce(const Goal& goal, const QuantClause& clause, const VarSet& scope) {
    assert(goal.atom);
    assert(goal.atom->relation == clause.head.relation);
    assert(goal.atom->args.size() == clause.head.args.size());

    Renaming rho;
    for (size_t i = 0; i < clause.head.args.size(); ++i)
        rho.add(clause.head.args[i], goal.atom->args[i]);
    for (Variable v : clause.vars())
        if (!rho.mapping().count(v)) rho.add(v, Variable::fresh(v.name()));

    Resolvent res;
    res.renaming = rho;
    HerbrandConstraint cc;
    for (const Equation& eq : clause.constraint.equations())
        cc.append({rho.apply(eq.lhs), rho.apply(eq.rhs)});
    res.clause_constraint = cc;
    for (const Atom& b : clause.body) {
        Atom rb{b.relation, {}};
        rb.args.reserve(b.args.size());
        for (Variable v : b.args) rb.args.push_back(rho.apply(v));
        res.atoms.push_back(std::move(rb));
    }
    VarSet keep = scope;
    for (const Atom& a : res.atoms)
        for (Variable v : a.args) keep.insert(v);
    res.constraint = conjoin_project(goal.constraint, cc, keep);
    return res;
}

ProofNodePtr expand_minmax(const Goal& goal, const Program& prog, const SearchOptions& opts) {
    VarSet root_vars = goal.vars();

    std::function<ProofNodePtr(const Goal&, int)> build = [&](const Goal& g,
                                                              int depth) -> ProofNodePtr {
        HerbrandConstraint store = solve(g.constraint);
        if (!g.atom || store.is_unsat()) {
            if (store.is_unsat()) return make_node(NodeKind::Failure, Rational(0), "false");
            return make_node(NodeKind::Success, Rational(1), store.to_string());
        }
        if (depth >= opts.depth_limit)
            return make_node(NodeKind::Failure, Rational(0), "false", {}, std::nullopt, true);

        Goal solved_goal{g.atom, store};
        VarSet scope = root_vars;
        for (Variable v : g.atom->args) scope.insert(v);
        for (Variable v : store.variables()) scope.insert(v);

        std::vector<ProofNodePtr> min_children;
        Rational best(0);
        bool truncated = false;
        for (size_t ci : prog.clauses_for(g.atom->relation, g.atom->args.size())) {
            const QuantClause& clause = prog.clauses[ci];
            Resolvent res = reduce(solved_goal, clause, scope);
            std::string label = resolvent_label(store, res);

            std::vector<ProofNodePtr> children;
            Rational agg(1);
            bool child_trunc = false;
            if (res.constraint.is_unsat()) {
                children.push_back(make_node(NodeKind::Failure, Rational(0), "false"));
                agg = 0;
            } else if (res.atoms.empty()) {
                children.push_back(
                    make_node(NodeKind::Success, Rational(1), res.constraint.to_string()));
            } else {
                for (const Atom& b : res.atoms) {
                    ProofNodePtr child = build(Goal{b, res.constraint}, depth + 1);
                    agg = agg_combine(opts.mode, agg, child->value);
                    child_trunc = child_trunc || child->truncated;
                    children.push_back(std::move(child));
                }
            }
            Rational value = clause.factor.value() * agg;
            min_children.push_back(make_node(NodeKind::Min, value, std::move(label),
                                             std::move(children), ci, child_trunc));
            best = std::max(best, value);
            truncated = truncated || child_trunc;
        }
        return make_node(NodeKind::Max, best, goal_label(*g.atom, store),
                         std::move(min_children), std::nullopt, truncated);
    };
    return build(goal, 0);
}

namespace {

// Depth-first enumeration of proof trees with the constraint store threaded
// left-to-right through clause bodies, so every emitted proof tree's
// terminal constraints are jointly satisfiable by construction.
class JointSearch {
public:
    JointSearch(const Program& prog, const SearchOptions& opts, VarSet query_vars,
                SearchStats& stats, bool prune)
        : prog_(prog), opts_(opts), query_vars_(std::move(query_vars)), stats_(stats),
          prune_(prune) {}

    void run(const Goal& goal, const AnswerSink& sink) {
        sink_ = &sink;
        HerbrandConstraint store = solve(goal.constraint);
        if (store.is_unsat()) {
            ++stats_.nodes_expanded;  // failure root
            return;
        }
        if (!goal.atom) {
            ++stats_.nodes_expanded;  // success root
            HerbrandConstraint shown = conjoin_project(store, HerbrandConstraint::top(),
                                                       query_vars_);
            ProofNodePtr node =
                make_node(NodeKind::Success, Rational(1), shown.to_string());
            emit(Rational(1), store, node);
            return;
        }
        prove_atom(*goal.atom, store, 0, query_vars_,
                   [&](const Rational& v, const HerbrandConstraint& end_store,
                       ProofNodePtr node) { return emit(v, end_store, std::move(node)); });
    }

private:
    using AtomCont =
        std::function<bool(const Rational&, const HerbrandConstraint&, ProofNodePtr)>;

    struct Level {
        Rational factor;
        Rational agg;  // aggregate of completed sibling values
    };

    bool emit(const Rational& v, const HerbrandConstraint& end_store, ProofNodePtr root) {
        if (!alpha_ || v > *alpha_) alpha_ = v;
        HerbrandConstraint ac =
            conjoin_project(end_store, HerbrandConstraint::top(), query_vars_);
        return (*sink_)(Answer{std::move(ac), v, std::move(root)});
    }

    // Value of the current completion if the open node evaluated to x and
    // everything still pending evaluated to 1.
    Rational optimistic(Rational x) const {
        for (auto it = levels_.rbegin(); it != levels_.rend(); ++it)
            x = it->factor * agg_combine(opts_.mode, it->agg, x);
        return x;
    }

    // Ground call signature, or nullopt when some argument is unbound or
    // non-ground. Used for the repeated-goal cut: a ground call equal to an
    // ancestor call is value-dominated and binds nothing new.
    std::optional<std::string> ground_key(const Atom& atom,
                                          const HerbrandConstraint& store) const {
        std::string key = atom.relation + "/";
        for (Variable v : atom.args) {
            const Term* b = store.binding(v);
            if (!b || !b->vars().empty()) return std::nullopt;
            key += '|';
            key += b->to_string();
        }
        return key;
    }

    bool prove_atom(const Atom& atom, const HerbrandConstraint& store, int depth,
                    const VarSet& scope_after, const AtomCont& k) {
        ++stats_.nodes_expanded;
        if (depth >= opts_.depth_limit) {
            stats_.truncated = true;
            return true;
        }
        // Ties may be cut: alpha is only ever set by completions found
        // earlier in canonical order, so the first-tie winner survives.
        if (prune_ && alpha_ && optimistic(Rational(1)) <= *alpha_) return true;
        std::optional<std::string> key = ground_key(atom, store);
        if (key) {
            if (std::find(call_keys_.begin(), call_keys_.end(), *key) != call_keys_.end())
                return true;
            call_keys_.push_back(*key);
        }
        std::string atom_label = goal_label(atom, store);
        // Each completion is handed up wrapped in this atom's max node. The
        // ground key marks derivation-tree ancestry only, so it must not be
        // live while the continuation proves sibling goals.
        auto call_k = [&](const AtomCont& cont, const Rational& v,
                          const HerbrandConstraint& s, ProofNodePtr min_node) {
            ProofNodePtr max_node =
                make_node(NodeKind::Max, v, atom_label, {std::move(min_node)});
            if (key) call_keys_.pop_back();
            bool go = cont(v, s, std::move(max_node));
            if (key) call_keys_.push_back(*key);
            return go;
        };
        bool keep_going = true;
        Goal goal{atom, store};
        for (size_t ci : prog_.clauses_for(atom.relation, atom.args.size())) {
            const QuantClause& clause = prog_.clauses[ci];
            const Rational& f = clause.factor.value();
            if (prune_ && alpha_ && optimistic(f) <= *alpha_) continue;
            if (opts_.epsilon > 0 && fprod_ * f < opts_.epsilon) continue;

            Resolvent res = reduce(goal, clause, scope_after);
            ++stats_.nodes_expanded;  // min node
            if (res.constraint.is_unsat()) {
                ++stats_.nodes_expanded;  // failure terminal
                continue;
            }
            std::string label = resolvent_label(store, res);
            if (res.atoms.empty()) {
                ++stats_.nodes_expanded;  // success terminal
                ProofNodePtr succ =
                    make_node(NodeKind::Success, Rational(1), res.constraint.to_string());
                ProofNodePtr mn =
                    make_node(NodeKind::Min, f, std::move(label), {std::move(succ)}, ci);
                if (!call_k(k, f, res.constraint, std::move(mn))) {
                    keep_going = false;
                    break;
                }
                continue;
            }

            // Suffix scopes: variables still needed after body atom i.
            std::vector<VarSet> suffix(res.atoms.size());
            VarSet acc = scope_after;
            for (size_t i = res.atoms.size(); i-- > 0;) {
                suffix[i] = acc;
                for (Variable v : res.atoms[i].args) acc.insert(v);
            }

            Rational entry_fprod = fprod_;
            levels_.push_back({f, Rational(1)});
            fprod_ = entry_fprod * f;
            std::vector<ProofNodePtr> children(res.atoms.size());
            bool cont = prove_seq(
                res.atoms, 0, res.constraint, depth + 1, suffix, children,
                [&](const HerbrandConstraint& end_store) {
                    Rational value = f * levels_.back().agg;
                    ProofNodePtr mn = make_node(NodeKind::Min, value, label, children, ci);
                    // The clause is complete; its level must not count as
                    // open while the continuation explores what follows.
                    Level closed = levels_.back();
                    levels_.pop_back();
                    fprod_ = entry_fprod;
                    bool go = call_k(k, value, end_store, std::move(mn));
                    fprod_ = entry_fprod * f;
                    levels_.push_back(closed);
                    return go;
                });
            levels_.pop_back();
            fprod_ = entry_fprod;
            if (!cont) {
                keep_going = false;
                break;
            }
        }
        if (key) call_keys_.pop_back();
        return keep_going;
    }

    bool prove_seq(const std::vector<Atom>& atoms, size_t idx, const HerbrandConstraint& store,
                   int depth, const std::vector<VarSet>& suffix,
                   std::vector<ProofNodePtr>& children,
                   const std::function<bool(const HerbrandConstraint&)>& done) {
        if (idx == atoms.size()) return done(store);
        return prove_atom(
            atoms[idx], store, depth, suffix[idx],
            [&](const Rational& v, const HerbrandConstraint& s2, ProofNodePtr node) {
                Level& lvl = levels_.back();
                Rational saved = lvl.agg;
                lvl.agg = agg_combine(opts_.mode, saved, v);
                children[idx] = std::move(node);
                bool cont = prove_seq(atoms, idx + 1, s2, depth, suffix, children, done);
                levels_.back().agg = saved;
                children[idx] = nullptr;
                return cont;
            });
    }

    const Program& prog_;
    const SearchOptions& opts_;
    VarSet query_vars_;
    SearchStats& stats_;
    bool prune_;
    const AnswerSink* sink_ = nullptr;
    std::optional<Rational> alpha_;
    std::vector<Level> levels_;
    Rational fprod_{1};
    std::vector<std::string> call_keys_;
};

}  // namespace

namespace {

void validate_options(const SearchOptions& opts) {
    if (opts.depth_limit < 0) throw Error("depth_limit must be nonnegative");
    if (opts.epsilon < 0 || opts.epsilon >= 1) throw Error("epsilon must lie in [0,1)");
}

}  // namespace

void for_each_answer(const Query& query, const Program& prog, const SearchOptions& opts,
                     const AnswerSink& sink, SearchStats* stats) {
    validate_options(opts);
    SearchStats local;
    VarSet vars(query.display_vars.begin(), query.display_vars.end());
    JointSearch engine(prog, opts, std::move(vars), stats ? *stats : local, false);
    engine.run(query.goal, sink);
}

std::vector<Answer> enumerate_answers(const Query& query, const Program& prog,
                                      const SearchOptions& opts, SearchStats* stats) {
    std::vector<Answer> out;
    for_each_answer(
        query, prog, opts,
        [&](const Answer& a) {
            out.push_back(a);
            return true;
        },
        stats);
    std::stable_sort(out.begin(), out.end(),
                     [](const Answer& a, const Answer& b) { return a.value > b.value; });
    if (opts.dedup) {
        std::set<std::string> seen;
        std::vector<Answer> unique;
        for (Answer& a : out) {
            std::string k = a.constraint.to_string() + "@" + to_fraction_string(a.value);
            if (seen.insert(k).second) unique.push_back(std::move(a));
        }
        out = std::move(unique);
    }
    return out;
}

std::optional<Answer> best_proof(const Query& query, const Program& prog,
                                 const SearchOptions& opts, SearchStats& stats) {
    validate_options(opts);
    VarSet vars(query.display_vars.begin(), query.display_vars.end());
    std::vector<int> schedule;
    for (int d = 1; d < opts.depth_limit; d *= 2) schedule.push_back(d);
    schedule.push_back(opts.depth_limit);

    std::optional<Answer> best;
    for (int d : schedule) {
        SearchOptions run_opts = opts;
        run_opts.depth_limit = d;
        SearchStats run_stats;
        std::optional<Answer> run_best;
        JointSearch engine(prog, run_opts, vars, run_stats,
                           opts.strategy == Strategy::AlphaBeta);
        engine.run(query.goal, [&](const Answer& a) {
            if (!run_best || a.value > run_best->value) run_best = a;
            return true;
        });
        stats.nodes_expanded += run_stats.nodes_expanded;
        stats.truncated = run_stats.truncated;
        if (run_best) best = std::move(run_best);
        if (!run_stats.truncated) break;
    }
    return best;
}

Query make_query(Goal goal) {
    VarSet vars = goal.vars();
    return Query{std::move(goal), {vars.begin(), vars.end()}};
}

}  // namespace qclp
