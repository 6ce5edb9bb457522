#pragma once

#include <string>

#include "qclp/fixpoint.hpp"
#include "qclp/solver.hpp"

#include "json.hpp"

namespace qclp {

using Json = nlohmann::json;

/// Indented one-node-per-line rendering of a proof / min-max tree.
std::string format_tree(const ProofNode& node);

/// Structured document: kind, label, clause id, exact value "p/q",
/// truncation flag, children.
Json tree_to_json(const ProofNode& node);

/// Inverse of tree_to_json. Throws qclp::Error on malformed documents.
ProofNodePtr tree_from_json(const Json& j);

std::string format_answer(const Answer& answer, const std::vector<Variable>& vars);

Json answer_to_json(const Answer& answer, bool include_proof);

/// Reader-side view of a serialized answer.
struct AnswerDoc {
    std::string constraint;
    Rational value;
    ProofNodePtr proof;  // null when the document has no proof
};

AnswerDoc answer_from_json(const Json& j);
Json answer_doc_to_json(const AnswerDoc& doc);

bool tree_equal(const ProofNode& a, const ProofNode& b);

}  // namespace qclp
