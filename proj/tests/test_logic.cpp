#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "xscore/errors.hpp"
#include "xscore/sat.hpp"

using namespace xscore;

namespace {

bool same_function(const FormulaPtr& a, const FormulaPtr& b) {
    std::vector<std::string> atoms;
    collect_atoms(a, atoms);
    collect_atoms(b, atoms);
    std::vector<std::string> dedup;
    for (const auto& x : atoms)
        if (std::find(dedup.begin(), dedup.end(), x) == dedup.end()) dedup.push_back(x);
    std::vector<std::pair<std::string, bool>> assignment;
    for (const auto& x : dedup) assignment.emplace_back(x, false);
    for (uint64_t m = 0; m < (uint64_t{1} << dedup.size()); ++m) {
        for (size_t k = 0; k < dedup.size(); ++k) assignment[k].second = (m >> k) & 1u;
        if (eval_formula(a, assignment) != eval_formula(b, assignment)) return false;
    }
    return true;
}

} // namespace

TEST_CASE("parser precedence") {
    CHECK(same_function(parse_formula("a & b | c"), f_or(f_and(f_atom("a"), f_atom("b")), f_atom("c"))));
    CHECK(same_function(parse_formula("!a | b"), f_implies(f_atom("a"), f_atom("b"))));
    CHECK(same_function(parse_formula("a -> b -> c"),
                        f_implies(f_atom("a"), f_implies(f_atom("b"), f_atom("c")))));
    CHECK(same_function(parse_formula("a <-> b -> c"), f_iff(f_atom("a"), f_implies(f_atom("b"), f_atom("c")))));
    CHECK(same_function(parse_formula("!(a | b)"), f_and(f_not(f_atom("a")), f_not(f_atom("b")))));
    CHECK(same_function(parse_formula("true -> false"), f_false()));
}

TEST_CASE("parser structure, not just semantics") {
    FormulaPtr f = parse_formula("a & b | c");
    REQUIRE(f->kind == Formula::Kind::Or);
    CHECK(f->kids[0]->kind == Formula::Kind::And);
    FormulaPtr imp = parse_formula("a -> b -> c");
    REQUIRE(imp->kind == Formula::Kind::Implies);
    CHECK(imp->kids[1]->kind == Formula::Kind::Implies);
}

TEST_CASE("parser accepts identifier atoms, rejects junk") {
    CHECK(parse_formula("Ab_1 & x2")->kind == Formula::Kind::And);
    CHECK_THROWS_AS(parse_formula(""), ParseError);
    CHECK_THROWS_AS(parse_formula("a &"), ParseError);
    CHECK_THROWS_AS(parse_formula("(a"), ParseError);
    CHECK_THROWS_AS(parse_formula("a b"), ParseError);
    CHECK_THROWS_AS(parse_formula("1a"), ParseError);
    CHECK_THROWS_AS(parse_formula("a -> -> b"), ParseError);
    CHECK_THROWS_AS(parse_formula("a <- b"), ParseError);
}

TEST_CASE("render is a fixpoint and preserves meaning") {
    for (const char* text : {"a & b | c", "!(a -> b) <-> c & !d", "a -> b -> c", "!(a & b) | (c <-> d)",
                             "true | x", "!a & !b & c"}) {
        FormulaPtr f = parse_formula(text);
        std::string rendered = render_formula(f);
        FormulaPtr again = parse_formula(rendered);
        CHECK(same_function(f, again));
        CHECK(render_formula(again) == rendered);
    }
}

TEST_CASE("collect_atoms dedups in first-appearance order") {
    std::vector<std::string> atoms;
    collect_atoms(parse_formula("b & a | (b -> c)"), atoms);
    CHECK(atoms == std::vector<std::string>{"b", "a", "c"});
}

TEST_CASE("eval_formula needs a covering assignment") {
    FormulaPtr f = parse_formula("a & b");
    CHECK(eval_formula(f, {{"a", true}, {"b", true}}));
    CHECK_FALSE(eval_formula(f, {{"a", true}, {"b", false}}));
    CHECK_THROWS_AS(eval_formula(f, {{"a", true}}), PreconditionError);
}

TEST_CASE("sat on simple theories") {
    SatResult r = sat({parse_formula("a | b"), parse_formula("!a")});
    CHECK(r.satisfiable);
    CHECK(r.model.at("a") == false);
    CHECK(r.model.at("b") == true);

    CHECK_FALSE(sat({parse_formula("a"), parse_formula("!a")}).satisfiable);
    CHECK(sat({}).satisfiable);
    CHECK_FALSE(sat({parse_formula("false")}).satisfiable);
}

TEST_CASE("sat model satisfies the whole theory") {
    std::vector<FormulaPtr> theory = {parse_formula("a -> b"), parse_formula("b -> c"), parse_formula("a | d"),
                                      parse_formula("!c")};
    SatResult r = sat(theory);
    REQUIRE(r.satisfiable);
    std::vector<std::pair<std::string, bool>> assignment(r.model.begin(), r.model.end());
    for (const auto& f : theory) CHECK(eval_formula(f, assignment));
}

TEST_CASE("entails modus ponens and its failure") {
    std::vector<FormulaPtr> theory = {parse_formula("a"), parse_formula("a -> b")};
    CHECK(entails(theory, parse_formula("b")));
    CHECK_FALSE(entails(theory, parse_formula("!b")));
    CHECK_FALSE(entails({parse_formula("a | b")}, parse_formula("a")));
    // inconsistent theories entail everything
    CHECK(entails({parse_formula("a"), parse_formula("!a")}, parse_formula("q")));
}

TEST_CASE("dpll is deterministic") {
    std::vector<FormulaPtr> theory = {parse_formula("a | b | c"), parse_formula("!a | !b")};
    SatResult r1 = sat(theory);
    SatResult r2 = sat(theory);
    CHECK(r1.model == r2.model);
}

TEST_CASE("clausifier rejects late atoms") {
    Clausifier c;
    c.assert_formula(parse_formula("a & b"));
    CHECK(c.find_atom("a").has_value());
    CHECK_THROWS_AS(c.atom_var("late"), PreconditionError);
}

TEST_CASE("sat agrees with the truth-table oracle on random theories") {
    xtest::Rng rng(71);
    std::vector<std::string> atoms = {"p", "q", "r", "s"};
    for (int trial = 0; trial < 120; ++trial) {
        std::vector<FormulaPtr> theory;
        int count = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < count; ++i) theory.push_back(xtest::random_formula(rng, atoms, 3));
        CHECK(sat(theory).satisfiable == xtest::satisfiable_by_truth_table(theory));
    }
}

TEST_CASE("entails agrees with the truth-table oracle on random theories") {
    xtest::Rng rng(72);
    std::vector<std::string> atoms = {"p", "q", "r"};
    for (int trial = 0; trial < 120; ++trial) {
        std::vector<FormulaPtr> theory = {xtest::random_formula(rng, atoms, 3),
                                          xtest::random_formula(rng, atoms, 2)};
        FormulaPtr goal = xtest::random_formula(rng, atoms, 2);
        CHECK(entails(theory, goal) == xtest::entails_by_truth_table(theory, goal));
    }
}
