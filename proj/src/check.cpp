#include "qclp/check.hpp"

namespace qclp {

int heuristic_depth(size_t stabilized_at, const Program& prog) {
    size_t max_body = 0;
    for (const QuantClause& c : prog.clauses) max_body = std::max(max_body, c.body.size());
    return static_cast<int>(stabilized_at * (max_body + 1) + 1);
}

namespace {

// Every ground atom over the program's declared relations and universe.
std::vector<GroundAtom> all_ground_atoms(const Program& prog,
                                         const std::vector<std::string>& universe) {
    std::vector<GroundAtom> out;
    for (const auto& [rel, arity] : prog.signature.relations) {
        if (arity == 0) {
            out.push_back({rel, {}});
            continue;
        }
        if (universe.empty()) continue;
        std::vector<size_t> odo(arity, 0);
        while (true) {
            GroundTuple t;
            for (size_t i = 0; i < arity; ++i) t.push_back(universe[odo[i]]);
            out.push_back({rel, std::move(t)});
            size_t i = 0;
            for (; i < odo.size(); ++i) {
                if (++odo[i] < universe.size()) break;
                odo[i] = 0;
            }
            if (i == odo.size()) break;
        }
    }
    return out;
}

Query ground_query(const GroundAtom& g) {
    Atom atom{g.relation, {}};
    HerbrandConstraint phi;
    for (const std::string& c : g.args) {
        Variable v = Variable::fresh("Q" + std::to_string(atom.args.size()));
        atom.args.push_back(v);
        phi.append({Term(v), Term(c)});
    }
    return make_query(Goal{std::move(atom), std::move(phi)});
}

}  // namespace

AgreementReport check_agreement(const Program& prog, int depth_override) {
    AgreementReport report;
    MinimalModelResult oracle = minimal_model(prog);
    report.stabilized_at = oracle.trace.stabilized_at;
    int depth = depth_override > 0 ? depth_override
                                   : heuristic_depth(oracle.trace.stabilized_at, prog);

    for (const GroundAtom& g : all_ground_atoms(prog, oracle.model.universe())) {
        GoalReport gr;
        gr.goal = g;
        Query q = ground_query(g);
        gr.oracle_value = consequence_value(oracle.model, q.goal, HerbrandConstraint::top());

        SearchOptions opts;
        opts.depth_limit = depth;
        opts.mode = prog.combination_mode;

        opts.strategy = Strategy::Exhaustive;
        SearchStats ex_stats;
        auto ex = best_proof(q, prog, opts, ex_stats);
        gr.exhaustive_value = ex ? ex->value : Rational(0);
        gr.exhaustive_nodes = ex_stats.nodes_expanded;

        opts.strategy = Strategy::AlphaBeta;
        SearchStats ab_stats;
        auto ab = best_proof(q, prog, opts, ab_stats);
        gr.alphabeta_value = ab ? ab->value : Rational(0);
        gr.alphabeta_nodes = ab_stats.nodes_expanded;

        gr.ok = gr.oracle_value == gr.exhaustive_value &&
                gr.oracle_value == gr.alphabeta_value &&
                gr.alphabeta_nodes <= gr.exhaustive_nodes;
        if (!gr.ok) ++report.failures;
        report.goals.push_back(std::move(gr));
    }
    return report;
}

}  // namespace qclp
