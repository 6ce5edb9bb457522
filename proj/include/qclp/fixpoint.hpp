#pragma once

#include <map>
#include <string>
#include <vector>

#include "qclp/program.hpp"

namespace qclp {

using GroundTuple = std::vector<std::string>;

struct GroundAtom {
    std::string relation;
    GroundTuple args;

    friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
    std::string to_string() const;
};

/// An assignment of membership degrees in [0,1] to ground atoms over a
/// finite constant universe. Missing entries denote 0.
class FuzzyInterpretation {
public:
    FuzzyInterpretation() = default;
    explicit FuzzyInterpretation(std::vector<std::string> universe)
        : universe_(std::move(universe)) {}

    const std::vector<std::string>& universe() const { return universe_; }

    Rational value(const GroundAtom& atom) const;
    void set(GroundAtom atom, Rational v);

    const std::map<GroundAtom, Rational>& entries() const { return mu_; }

    bool pointwise_leq(const FuzzyInterpretation& other) const;

    friend bool operator==(const FuzzyInterpretation& a, const FuzzyInterpretation& b);

private:
    std::map<GroundAtom, Rational> mu_;
    std::vector<std::string> universe_;
};

struct ChainTrace {
    std::vector<FuzzyInterpretation> steps;  // A0, A1, ...
    size_t stabilized_at = 0;
};

struct OracleOptions {
    size_t iteration_cap = 10000;
    /// Extra constants joined with the program's own (e.g. from the query).
    std::vector<std::string> extra_constants;
};

/// One application of the consequence operator: for every relation and
/// ground tuple, the maximum over applicable clause instantiations of
/// factor (x) aggregate of body values in `interp`. Function-free only.
FuzzyInterpretation chain_step(const Program& prog, const FuzzyInterpretation& interp);

struct MinimalModelResult {
    FuzzyInterpretation model;
    ChainTrace trace;
};

/// Iterates chain_step from the all-zero interpretation until two
/// consecutive steps agree. Throws on fragment violations and if the
/// iteration cap is exceeded.
MinimalModelResult minimal_model(const Program& prog, const OracleOptions& opts = {});

/// True iff every clause inequality holds for every assignment over the
/// interpretation's universe.
bool model_check(const Program& prog, const FuzzyInterpretation& interp);

/// Largest v such that `interp` models {answer ->_v goal}: the minimum of
/// the goal atom's value over the solutions of `answer` that also solve the
/// goal constraint. Throws if `answer` has no solution over the universe.
Rational consequence_value(const FuzzyInterpretation& interp, const Goal& goal,
                           const HerbrandConstraint& answer);

/// Sorted "relation(tuple) = p/q" lines for the nonzero entries.
std::string format_model(const FuzzyInterpretation& interp);

}  // namespace qclp
