#include "doctest.h"

#include "qclp/parser.hpp"
#include "qclp/serialize.hpp"

using namespace qclp;

namespace {

Program must_parse(const std::string& text) {
    ParseResult r = parse_program(text);
    REQUIRE(r.ok());
    return std::move(r.program);
}

}  // namespace

TEST_CASE("tree text rendering") {
    Program p = must_parse(
        "p(X) <- 0.7 : X = phi.\n"
        "p(X) <- 0.5 : X = phi.\n"
        "p(X) <- 0.9 : X = psi.\n");
    QueryParse qp = parse_query("p(X) & X = phi", p.signature);
    REQUIRE(qp.ok());
    Query q = normalize_goal(std::move(qp.atoms), std::move(qp.constraint), p);
    SearchOptions opts;
    ProofNodePtr root = expand_minmax(q.goal, p, opts);
    std::string text = format_tree(*root);
    CHECK(text.find("max p(X) & X = phi = 7/10") == 0);
    CHECK(text.find("[clause 1]") != std::string::npos);
    CHECK(text.find("success X = phi = 1") != std::string::npos);
    CHECK(text.find("failure false = 0") != std::string::npos);
}

TEST_CASE("tree JSON round trip") {
    Program p = must_parse(
        "p(X) <- 0.7 : X = phi.\n"
        "q(X) <- 0.25 : p(X).\n"
        "r(X) <- r(X).\n");
    QueryParse qp = parse_query("q(X)", p.signature);
    REQUIRE(qp.ok());
    Query q = normalize_goal(std::move(qp.atoms), std::move(qp.constraint), p);
    SearchOptions opts;
    opts.depth_limit = 3;
    ProofNodePtr root = expand_minmax(q.goal, p, opts);
    Json j = tree_to_json(*root);
    ProofNodePtr back = tree_from_json(j);
    CHECK(tree_equal(*root, *back));
    // and through a serialized string
    ProofNodePtr again = tree_from_json(Json::parse(j.dump()));
    CHECK(tree_equal(*root, *again));
}

TEST_CASE("malformed tree documents are rejected") {
    CHECK_THROWS_AS(tree_from_json(Json::parse(R"({"kind":"sideways"})")), std::exception);
    CHECK_THROWS_AS(
        tree_from_json(Json::parse(
            R"({"kind":"max","label":"","value":"x/y","truncated":false,"children":[]})")),
        Error);
}

TEST_CASE("answer formatting") {
    Program p = must_parse("p(X) <- 0.7 : X = phi.\n");
    QueryParse qp = parse_query("p(X)", p.signature);
    REQUIRE(qp.ok());
    Query q = normalize_goal(std::move(qp.atoms), std::move(qp.constraint), p);
    std::vector<Answer> answers = enumerate_answers(q, p, SearchOptions{});
    REQUIRE(answers.size() == 1);
    CHECK(format_answer(answers[0], q.display_vars) == "X = phi @ 7/10 (0.700000)");

    SUBCASE("structured output carries the same exact value") {
        Json j = answer_to_json(answers[0], true);
        CHECK(j["value"] == "7/10");
        CHECK(j["decimal"] == "0.700000");
        CHECK(j["constraint"] == "X = phi");
        ProofNodePtr back = tree_from_json(j["proof"]);
        CHECK(tree_equal(*answers[0].proof, *back));
    }
    SUBCASE("answer documents round-trip through the reader") {
        Json j = answer_to_json(answers[0], true);
        AnswerDoc doc = answer_from_json(Json::parse(j.dump()));
        CHECK(doc.value == answers[0].value);
        CHECK(answer_doc_to_json(doc) == j);
    }
}

TEST_CASE("unconstrained answers print true") {
    Program p = must_parse("p(X).\n");
    QueryParse qp = parse_query("p(X)", p.signature);
    REQUIRE(qp.ok());
    Query q = normalize_goal(std::move(qp.atoms), std::move(qp.constraint), p);
    std::vector<Answer> answers = enumerate_answers(q, p, SearchOptions{});
    REQUIRE(answers.size() == 1);
    CHECK(format_answer(answers[0], q.display_vars) == "true @ 1 (1.000000)");
}
