#include "qclp/serialize.hpp"

namespace qclp {

namespace {

const char* kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Max: return "max";
        case NodeKind::Min: return "min";
        case NodeKind::Success: return "success";
        case NodeKind::Failure: return "failure";
    }
    return "?";
}

NodeKind kind_from_name(const std::string& s) {
    if (s == "max") return NodeKind::Max;
    if (s == "min") return NodeKind::Min;
    if (s == "success") return NodeKind::Success;
    if (s == "failure") return NodeKind::Failure;
    throw Error("unknown node kind '" + s + "'");
}

void format_tree_rec(const ProofNode& node, int indent, std::string& out) {
    out.append(static_cast<size_t>(indent) * 2, ' ');
    out += kind_name(node.kind);
    if (node.clause) out += " [clause " + std::to_string(*node.clause + 1) + "]";
    out += " " + node.label;
    out += " = " + to_fraction_string(node.value);
    if (node.truncated) out += " (truncated)";
    out += "\n";
    for (const auto& c : node.children) format_tree_rec(*c, indent + 1, out);
}

}  // namespace

std::string format_tree(const ProofNode& node) {
    std::string out;
    format_tree_rec(node, 0, out);
    return out;
}

Json tree_to_json(const ProofNode& node) {
    Json j;
    j["kind"] = kind_name(node.kind);
    j["label"] = node.label;
    j["value"] = to_fraction_string(node.value);
    j["truncated"] = node.truncated;
    if (node.clause) j["clause"] = *node.clause + 1;
    Json children = Json::array();
    for (const auto& c : node.children) children.push_back(tree_to_json(*c));
    j["children"] = std::move(children);
    return j;
}

ProofNodePtr tree_from_json(const Json& j) {
    auto node = std::make_shared<ProofNode>();
    node->kind = kind_from_name(j.at("kind").get<std::string>());
    node->label = j.at("label").get<std::string>();
    auto value = parse_rational(j.at("value").get<std::string>());
    if (!value) throw Error("malformed value in tree document");
    node->value = *value;
    node->truncated = j.at("truncated").get<bool>();
    if (j.contains("clause")) node->clause = j.at("clause").get<size_t>() - 1;
    for (const Json& c : j.at("children")) node->children.push_back(tree_from_json(c));
    return node;
}

std::string format_answer(const Answer& answer, const std::vector<Variable>& vars) {
    std::string constraint_text;
    if (answer.constraint.equations().empty()) {
        constraint_text = "true";
    } else {
        // Bindings in query-variable order rather than id order.
        std::vector<std::string> parts;
        std::set<Variable> shown;
        for (Variable v : vars) {
            const Term* b = answer.constraint.binding(v);
            if (!b) continue;
            parts.push_back(v.name() + " = " + b->to_string());
            shown.insert(v);
        }
        for (const Equation& eq : answer.constraint.equations())
            if (!shown.count(eq.lhs.var()))
                parts.push_back(eq.lhs.to_string() + " = " + eq.rhs.to_string());
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) constraint_text += " & ";
            constraint_text += parts[i];
        }
    }
    return constraint_text + " @ " + to_fraction_string(answer.value) + " (" +
           to_decimal_string(answer.value) + ")";
}

Json answer_to_json(const Answer& answer, bool include_proof) {
    Json j;
    j["constraint"] = answer.constraint.to_string();
    j["value"] = to_fraction_string(answer.value);
    j["decimal"] = to_decimal_string(answer.value);
    if (include_proof && answer.proof) j["proof"] = tree_to_json(*answer.proof);
    return j;
}

AnswerDoc answer_from_json(const Json& j) {
    AnswerDoc doc;
    doc.constraint = j.at("constraint").get<std::string>();
    auto value = parse_rational(j.at("value").get<std::string>());
    if (!value) throw Error("malformed value in answer document");
    doc.value = *value;
    if (j.contains("proof")) doc.proof = tree_from_json(j.at("proof"));
    return doc;
}

Json answer_doc_to_json(const AnswerDoc& doc) {
    Json j;
    j["constraint"] = doc.constraint;
    j["value"] = to_fraction_string(doc.value);
    j["decimal"] = to_decimal_string(doc.value);
    if (doc.proof) j["proof"] = tree_to_json(*doc.proof);
    return j;
}

bool tree_equal(const ProofNode& a, const ProofNode& b) {
    if (a.kind != b.kind || a.value != b.value || a.truncated != b.truncated ||
        a.clause != b.clause || a.label != b.label ||
        a.children.size() != b.children.size())
        return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!tree_equal(*a.children[i], *b.children[i])) return false;
    return true;
}

}  // namespace qclp
