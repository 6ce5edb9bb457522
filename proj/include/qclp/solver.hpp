#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "qclp/program.hpp"

namespace qclp {

enum class NodeKind { Max, Min, Success, Failure };

/// A node of a min/max tree or of a proof tree. Max nodes are labeled by
/// goals and carry the maximum of their children's values; min nodes are
/// labeled by a clause and resolvent and carry factor (x) aggregate of their
/// children; success nodes carry 1, failure nodes 0.
struct ProofNode {
    NodeKind kind;
    Rational value;
    bool truncated = false;             // subtree was cut by the depth limit
    std::optional<size_t> clause;       // min nodes: clause index (0-based)
    std::string label;
    std::vector<std::shared_ptr<const ProofNode>> children;
};

using ProofNodePtr = std::shared_ptr<const ProofNode>;

enum class Strategy { Exhaustive, AlphaBeta };

struct SearchOptions {
    int depth_limit = 64;               // max-to-max units
    Rational epsilon = Rational(0);     // cut branches with factor product below
    Strategy strategy = Strategy::AlphaBeta;
    CombinationMode mode = CombinationMode::Min;
    bool dedup = false;                 // drop repeated (constraint, value) answers
};

struct SearchStats {
    std::uint64_t nodes_expanded = 0;
    bool truncated = false;             // some branch hit the depth limit
};

struct Answer {
    HerbrandConstraint constraint;      // solved, projected to the query variables
    Rational value;
    ProofNodePtr proof;
};

/// Result of one goal-reduction step: the renamed clause body plus the
/// solved conjunction of the goal constraint and the clause constraint.
struct Resolvent {
    std::vector<Atom> atoms;
    HerbrandConstraint constraint;       // solved or unsatisfiable
    HerbrandConstraint clause_constraint;  // renamed, pre-conjunction (for display)
    Renaming renaming;
};

/// Applies a clause to the goal's atom: head variables map onto the goal
/// atom's arguments, remaining clause variables are renamed apart, and the
/// constraints are conjoined and projected to `scope` plus the body's
/// variables. An unsatisfiable result marks a failure branch.
Resolvent reduce(const Goal& goal, const QuantClause& clause, const VarSet& scope);

/// Builds the min/max tree for the goal: each max node has one min child
/// per applicable clause (file order), each min node one max child per body
/// atom over the solved combined constraint. Nodes cut by the depth limit
/// become failure nodes flagged as truncated, so the root value is a lower
/// bound within this tree.
ProofNodePtr expand_minmax(const Goal& goal, const Program& prog, const SearchOptions& opts);

/// Streams proof trees in discovery order (clause order, left to right).
/// The callback returns false to stop the search.
using AnswerSink = std::function<bool(const Answer&)>;
void for_each_answer(const Query& query, const Program& prog, const SearchOptions& opts,
                     const AnswerSink& sink, SearchStats* stats = nullptr);

/// All proof trees within the depth limit whose answer constraint is
/// satisfiable, sorted by value descending, ties in discovery order.
std::vector<Answer> enumerate_answers(const Query& query, const Program& prog,
                                      const SearchOptions& opts, SearchStats* stats = nullptr);

/// Maximum-value answer (first in tie order), or nullopt if no proof exists
/// within the depth limit. Runs iterative deepening up to opts.depth_limit,
/// stopping early once a depth is fully explored without truncation.
std::optional<Answer> best_proof(const Query& query, const Program& prog,
                                 const SearchOptions& opts, SearchStats& stats);

Query make_query(Goal goal);

}  // namespace qclp
