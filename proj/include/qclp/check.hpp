#pragma once

#include "qclp/fixpoint.hpp"
#include "qclp/solver.hpp"

namespace qclp {

struct GoalReport {
    GroundAtom goal;
    Rational oracle_value;
    Rational exhaustive_value;   // 0 when no proof found
    Rational alphabeta_value;
    std::uint64_t exhaustive_nodes = 0;
    std::uint64_t alphabeta_nodes = 0;
    bool ok = false;
};

struct AgreementReport {
    std::vector<GoalReport> goals;
    size_t failures = 0;
    size_t stabilized_at = 0;

    bool ok() const { return failures == 0; }
};

/// Three-way agreement between the fixpoint oracle and best-proof search
/// (exhaustive and alpha-beta) over every ground goal of a function-free
/// program. The depth limit follows the stabilization-based bound unless
/// `depth_override` is positive.
AgreementReport check_agreement(const Program& prog, int depth_override = 0);

/// The iterative-deepening bound used by check_agreement.
int heuristic_depth(size_t stabilized_at, const Program& prog);

}  // namespace qclp
