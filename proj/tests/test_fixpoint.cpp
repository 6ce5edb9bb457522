#include "doctest.h"

#include <random>

#include "qclp/fixpoint.hpp"
#include "qclp/parser.hpp"
#include "support/gen.hpp"
#include "support/reference.hpp"

using namespace qclp;

namespace {

const char* kExample1 =
    "p(X) <- 0.7 : X = phi.\n"
    "p(X) <- 0.5 : X = phi.\n"
    "p(X) <- 0.9 : X = psi.\n";

const char* kReachability =
    "edge(a, b) <- 0.8.\n"
    "edge(b, c) <- 0.6.\n"
    "path(X, Y) <- edge(X, Y).\n"
    "path(X, Z) <- edge(X, Y) & path(Y, Z).\n";

Program must_parse(const std::string& text) {
    ParseResult r = parse_program(text);
    std::string first = r.diagnostics.empty() ? "" : r.diagnostics[0].to_string();
    REQUIRE_MESSAGE(r.ok(), first);
    return std::move(r.program);
}

Goal atom_goal(const std::string& rel, const std::vector<std::string>& args) {
    Atom atom{rel, {}};
    HerbrandConstraint phi;
    for (const std::string& c : args) {
        Variable v = Variable::fresh();
        atom.args.push_back(v);
        phi.append({Term(v), Term(c)});
    }
    return Goal{std::move(atom), std::move(phi)};
}

}  // namespace

TEST_CASE("three-clause example model") {
    Program p = must_parse(kExample1);
    MinimalModelResult r = minimal_model(p);
    CHECK(r.model.value({"p", {"phi"}}) == make_rational(7, 10));
    CHECK(r.model.value({"p", {"psi"}}) == make_rational(9, 10));
    CHECK(r.trace.stabilized_at == 1);

    SUBCASE("step 0 is the all-zero interpretation") {
        CHECK(r.trace.steps[0].entries().empty());
    }
    SUBCASE("step 1 takes the max over both phi clauses") {
        FuzzyInterpretation a1 = chain_step(p, r.trace.steps[0]);
        CHECK(a1.value({"p", {"phi"}}) == make_rational(7, 10));
    }
    SUBCASE("the fixpoint is a model, the zero interpretation is not") {
        CHECK(model_check(p, r.model));
        CHECK(!model_check(p, r.trace.steps[0]));
    }
}

TEST_CASE("empty program stabilizes immediately at zero") {
    Program p = must_parse("");
    MinimalModelResult r = minimal_model(p);
    CHECK(r.model.entries().empty());
    CHECK(r.trace.stabilized_at == 0);
}

TEST_CASE("recursion without a base case stays at zero") {
    Program p = must_parse("r(X) <- r(X).\nc(a).\n");
    MinimalModelResult r = minimal_model(p);
    CHECK(r.model.value({"r", {"a"}}) == 0);
}

TEST_CASE("weighted reachability") {
    Program p = must_parse(kReachability);
    SUBCASE("min mode") {
        MinimalModelResult r = minimal_model(p);
        CHECK(r.model.value({"path", {"a", "c"}}) == make_rational(3, 5));
        CHECK(r.model.value({"path", {"a", "b"}}) == make_rational(4, 5));
        // independent top-down enumeration agrees
        CHECK(refeval::best_derivation_value(p, r.model.universe(), {"path", {"a", "c"}},
                                             8) == make_rational(3, 5));
    }
    SUBCASE("product mode") {
        Program pp = must_parse(kReachability);
        pp.combination_mode = CombinationMode::Product;
        MinimalModelResult r = minimal_model(pp);
        CHECK(r.model.value({"path", {"a", "c"}}) == make_rational(12, 25));
        CHECK(refeval::best_derivation_value(pp, r.model.universe(), {"path", {"a", "c"}},
                                             8) == make_rational(12, 25));
    }
}

TEST_CASE("clauses with unsatisfiable constraints contribute nothing") {
    Program p = must_parse("p(X) <- X = a & X = b.\nq(c).\n");
    MinimalModelResult r = minimal_model(p);
    for (const std::string& c : r.model.universe())
        CHECK(r.model.value({"p", {c}}) == 0);
    CHECK(r.model.value({"q", {"c"}}) == 1);
}

TEST_CASE("fragment violations are rejected") {
    Program p = must_parse("p(X) <- X = f(a).\n");
    CHECK_THROWS_AS(minimal_model(p), FragmentError);
}

TEST_CASE("model_check") {
    Program p = must_parse(kExample1);
    MinimalModelResult r = minimal_model(p);
    SUBCASE("all-zero fails against a positive fact") {
        FuzzyInterpretation zero(r.model.universe());
        CHECK(!model_check(p, zero));
    }
    SUBCASE("raising everything to one still satisfies the inequalities") {
        FuzzyInterpretation ones(r.model.universe());
        for (const std::string& c : r.model.universe()) ones.set({"p", {c}}, Rational(1));
        CHECK(model_check(p, ones));
    }
}

TEST_CASE("consequence values") {
    Program p = must_parse(kExample1);
    MinimalModelResult r = minimal_model(p);

    SUBCASE("answer X = phi supports p at 7/10") {
        Variable x = Variable::fresh("X");
        Goal goal{Atom{"p", {x}},
                  HerbrandConstraint::of_equations({{Term(x), Term("phi")}})};
        HerbrandConstraint answer =
            HerbrandConstraint::of_equations({{Term(x), Term("phi")}});
        CHECK(consequence_value(r.model, goal, answer) == make_rational(7, 10));
    }
    SUBCASE("the trivial answer takes the minimum over all instances") {
        Variable x = Variable::fresh("X");
        Goal goal{Atom{"p", {x}}, HerbrandConstraint::top()};
        CHECK(consequence_value(r.model, goal, HerbrandConstraint::top()) ==
              make_rational(7, 10));
    }
    SUBCASE("unsatisfiable answers are rejected") {
        Variable x = Variable::fresh("X");
        Goal goal{Atom{"p", {x}}, HerbrandConstraint::top()};
        HerbrandConstraint answer = HerbrandConstraint::of_equations(
            {{Term(x), Term("phi")}, {Term(x), Term("psi")}});
        CHECK_THROWS_AS(consequence_value(r.model, goal, answer), Error);
    }
}

TEST_CASE("chain monotonicity and minimality on random programs") {
    std::mt19937_64 rng(101);
    for (int round = 0; round < 40; ++round) {
        Program p = gen::random_program(rng);
        MinimalModelResult r = minimal_model(p);

        for (size_t i = 0; i + 1 < r.trace.steps.size(); ++i)
            CHECK(r.trace.steps[i].pointwise_leq(r.trace.steps[i + 1]));

        // attainment: the trace ends exactly at the fixpoint
        REQUIRE(r.trace.stabilized_at == r.trace.steps.size() - 1);
        CHECK(r.trace.steps[r.trace.stabilized_at] == r.model);

        CHECK(model_check(p, r.model));

        FuzzyInterpretation raised = r.model;
        for (const auto& [rel, arity] : p.signature.relations) {
            if (rng() % 2) continue;
            std::vector<std::string> universe = r.model.universe();
            if (arity >= 1 && !universe.empty()) {
                GroundTuple t;
                for (size_t i = 0; i < arity; ++i)
                    t.push_back(universe[rng() % universe.size()]);
                raised.set({rel, t}, Rational(1));
            }
        }
        if (model_check(p, raised)) CHECK(r.model.pointwise_leq(raised));
    }
}

TEST_CASE("factor monotonicity") {
    std::mt19937_64 rng(202);
    for (int round = 0; round < 25; ++round) {
        Program p = gen::random_program(rng);
        if (p.clauses.empty()) continue;
        MinimalModelResult before = minimal_model(p);
        Program q = p;
        QuantClause& c = q.clauses[rng() % q.clauses.size()];
        c.factor = Factor((c.factor.value() + 1) / 2);
        MinimalModelResult after = minimal_model(q);
        CHECK(before.model.pointwise_leq(after.model));
    }
}

TEST_CASE("classical reduction: unit factors reproduce the least Herbrand model") {
    std::mt19937_64 rng(303);
    for (int round = 0; round < 25; ++round) {
        Program p = gen::with_unit_factors(gen::random_program(rng));
        MinimalModelResult r = minimal_model(p);
        std::set<GroundAtom> reference =
            refeval::classical_least_model(p, r.model.universe());
        std::set<GroundAtom> ours;
        for (const auto& [atom, v] : r.model.entries()) {
            CHECK(v == 1);
            ours.insert(atom);
        }
        CHECK(ours == reference);
    }
}

TEST_CASE("iteration cap reports rather than truncates") {
    Program p = must_parse("p(a).\n");
    OracleOptions opts;
    opts.iteration_cap = 0;
    CHECK_THROWS_WITH_AS(minimal_model(p, opts),
                         doctest::Contains("iteration cap"), Error);
}

TEST_CASE("oracle export format") {
    Program p = must_parse(kExample1);
    MinimalModelResult r = minimal_model(p);
    CHECK(format_model(r.model) == "p(phi) = 7/10\np(psi) = 9/10\n");
}

TEST_CASE("goal helper sanity") {
    Program p = must_parse(kReachability);
    MinimalModelResult r = minimal_model(p);
    Goal g = atom_goal("path", {"a", "c"});
    CHECK(consequence_value(r.model, g, HerbrandConstraint::top()) == make_rational(3, 5));
}
