#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "xscore/causality_db.hpp"
#include "xscore/diagnosis.hpp"
#include "xscore/errors.hpp"
#include "xscore/formula.hpp"
#include "xscore/json_io.hpp"

using namespace xscore;

namespace {

const char* kChainQuery = "Q :- S(x), R(x,y), S(y).";

Instance chain_d() {
    return instance_from_json(parse_json_text(R"json({
      "relations": {"R": [["c", "b"], ["a", "d"], ["b", "a"]], "S": [["a"], ["b"], ["c"], ["d"]]}
    })json", "chain"));
}

Instance chain_d_prime() {
    return instance_from_json(parse_json_text(R"json({
      "relations": {"R": [["c", "b"], ["a", "d"], ["b", "b"]], "S": [["a"], ["b"], ["c"]]}
    })json", "chain-swapped"));
}

DbTuple tup(const std::string& rel, std::vector<std::string> vals) { return DbTuple{rel, std::move(vals)}; }

const TupleCauseReport& report_for(const std::vector<TupleCauseReport>& reports, const DbTuple& t) {
    for (const auto& r : reports)
        if (r.tuple == t) return r;
    REQUIRE(false);
    return reports.front();
}

// order-insensitive comparison of contingency families
std::set<std::set<DbTuple>> as_family(const std::vector<std::vector<DbTuple>>& gammas) {
    std::set<std::set<DbTuple>> out;
    for (const auto& g : gammas) out.insert(std::set<DbTuple>(g.begin(), g.end()));
    return out;
}

} // namespace

TEST_CASE("query parsing round-trips through the canonical rendering") {
    auto q = parse_query(kChainQuery);
    REQUIRE(q.atoms.size() == 3);
    CHECK(q.atoms[0].relation == "S");
    REQUIRE(q.atoms[1].terms.size() == 2);
    CHECK(q.atoms[1].terms[0].is_var);
    CHECK(q.atoms[1].terms[0].text == "x");
    CHECK(render_query(q) == kChainQuery);

    auto qc = parse_query("Q :- R('a', x), S(x).");
    REQUIRE(qc.atoms[0].terms.size() == 2);
    CHECK_FALSE(qc.atoms[0].terms[0].is_var);
    CHECK(qc.atoms[0].terms[0].text == "a");
    CHECK(render_query(qc) == "Q :- R('a',x), S(x).");
    CHECK(render_query(parse_query(render_query(qc))) == render_query(qc));
}

TEST_CASE("query parser rejects malformed input") {
    CHECK_THROWS_AS(parse_query(""), ParseError);
    CHECK_THROWS_AS(parse_query("Q S(x)."), ParseError);
    CHECK_THROWS_AS(parse_query("Q :- ."), ParseError);
    CHECK_THROWS_AS(parse_query("Q :- S(x)"), ParseError);
    CHECK_THROWS_AS(parse_query("Q :- S(x,."), ParseError);
    CHECK_THROWS_AS(parse_query("Q :- S('a."), ParseError);
    CHECK_THROWS_AS(parse_query("Q :- S(x). extra"), ParseError);
}

TEST_CASE("instance construction sorts, deduplicates, and validates") {
    Instance db = Instance::make({tup("S", {"b"}), tup("R", {"a", "b"}), tup("S", {"b"}), tup("S", {"a"})});
    REQUIRE(db.tuples.size() == 3);
    CHECK(db.tuples[0] == tup("R", {"a", "b"}));
    CHECK(db.tuples[1] == tup("S", {"a"}));
    CHECK(db.tuples[2] == tup("S", {"b"}));
    CHECK(db.index_of(tup("S", {"b"})) == 2);
    CHECK(db.index_of(tup("S", {"z"})) == -1);
    CHECK(db.endogenous_indices() == std::vector<int>{0, 1, 2});

    CHECK_THROWS_AS(Instance::make({tup("R", {"a"}), tup("R", {"a", "b"})}), ParseError);
    CHECK_THROWS_AS(Instance::make({tup("S", {"a"})}, {tup("S", {"b"})}), ParseError);

    Instance with_exo = Instance::make({tup("S", {"a"}), tup("S", {"b"})}, {tup("S", {"a"})});
    CHECK(with_exo.endogenous_indices() == std::vector<int>{1});
}

TEST_CASE("query evaluation reports the lexicographically least witness") {
    auto q = parse_query(kChainQuery);
    auto r = eval_cq(chain_d(), q);
    REQUIRE(r.holds);
    CHECK(r.witness == std::map<std::string, std::string>{{"x", "a"}, {"y", "d"}});

    auto r2 = eval_cq(chain_d_prime(), q);
    REQUIRE(r2.holds);
    CHECK(r2.witness == std::map<std::string, std::string>{{"x", "b"}, {"y", "b"}});

    auto rc = eval_cq(chain_d(), parse_query("Q :- R('a',x), S(x)."));
    REQUIRE(rc.holds);
    CHECK(rc.witness == std::map<std::string, std::string>{{"x", "d"}});

    CHECK_FALSE(eval_cq(chain_d(), parse_query("Q :- R(x,x).")).holds);
    CHECK_FALSE(eval_cq(chain_d(), parse_query("Q :- T(x,y).")).holds);
}

TEST_CASE("chain instance: every tuple is an actual cause with the derived responsibilities") {
    auto reports = causes(chain_d(), parse_query(kChainQuery));
    REQUIRE(reports.size() == 7);

    const auto& rad = report_for(reports, tup("R", {"a", "d"}));
    CHECK(rad.kind == TupleCauseReport::Kind::Actual);
    CHECK(rad.responsibility == Rational(1, 2));
    CHECK(as_family(rad.min_contingencies) == as_family({{tup("S", {"b"})}}));

    // breaking the other two chains needs one tuple from each
    const auto& rba = report_for(reports, tup("R", {"b", "a"}));
    CHECK(rba.kind == TupleCauseReport::Kind::Actual);
    CHECK(rba.responsibility == Rational(1, 3));
    CHECK(as_family(rba.min_contingencies) ==
          as_family({{tup("R", {"a", "d"}), tup("R", {"c", "b"})},
                     {tup("R", {"a", "d"}), tup("S", {"c"})},
                     {tup("R", {"c", "b"}), tup("S", {"d"})},
                     {tup("S", {"c"}), tup("S", {"d"})}}));

    const auto& rcb = report_for(reports, tup("R", {"c", "b"}));
    CHECK(rcb.responsibility == Rational(1, 2));
    CHECK(as_family(rcb.min_contingencies) == as_family({{tup("S", {"a"})}}));

    const auto& sa = report_for(reports, tup("S", {"a"}));
    CHECK(sa.responsibility == Rational(1, 2));
    CHECK(as_family(sa.min_contingencies) ==
          as_family({{tup("R", {"c", "b"})}, {tup("S", {"b"})}, {tup("S", {"c"})}}));

    const auto& sb = report_for(reports, tup("S", {"b"}));
    CHECK(sb.kind == TupleCauseReport::Kind::Actual);
    CHECK(sb.responsibility == Rational(1, 2));
    CHECK(as_family(sb.min_contingencies) ==
          as_family({{tup("R", {"a", "d"})}, {tup("S", {"a"})}, {tup("S", {"d"})}}));

    const auto& sc = report_for(reports, tup("S", {"c"}));
    CHECK(sc.responsibility == Rational(1, 2));
    CHECK(as_family(sc.min_contingencies) == as_family({{tup("S", {"a"})}}));

    const auto& sd = report_for(reports, tup("S", {"d"}));
    CHECK(sd.responsibility == Rational(1, 2));
    CHECK(as_family(sd.min_contingencies) == as_family({{tup("S", {"b"})}}));
}

TEST_CASE("swapped chain instance: one counterfactual cause, two non-causes") {
    auto reports = causes(chain_d_prime(), parse_query(kChainQuery));
    REQUIRE(reports.size() == 6);

    const auto& sb = report_for(reports, tup("S", {"b"}));
    CHECK(sb.kind == TupleCauseReport::Kind::Counterfactual);
    CHECK(sb.responsibility == Rational(1));
    REQUIRE(sb.min_contingencies.size() == 1);
    CHECK(sb.min_contingencies[0].empty());

    const auto& sc = report_for(reports, tup("S", {"c"}));
    CHECK(sc.kind == TupleCauseReport::Kind::Actual);
    CHECK(sc.responsibility == Rational(1, 2));
    CHECK(as_family(sc.min_contingencies) == as_family({{tup("R", {"b", "b"})}}));

    const auto& rbb = report_for(reports, tup("R", {"b", "b"}));
    CHECK(rbb.responsibility == Rational(1, 2));
    CHECK(as_family(rbb.min_contingencies) == as_family({{tup("R", {"c", "b"})}, {tup("S", {"c"})}}));

    const auto& rcb = report_for(reports, tup("R", {"c", "b"}));
    CHECK(rcb.responsibility == Rational(1, 2));
    CHECK(as_family(rcb.min_contingencies) == as_family({{tup("R", {"b", "b"})}}));

    CHECK(report_for(reports, tup("R", {"a", "d"})).kind == TupleCauseReport::Kind::NotACause);
    CHECK(report_for(reports, tup("R", {"a", "d"})).responsibility == Rational(0));
    CHECK(report_for(reports, tup("R", {"a", "d"})).min_contingencies.empty());
    CHECK(report_for(reports, tup("S", {"a"})).kind == TupleCauseReport::Kind::NotACause);
}

TEST_CASE("cause search preconditions and caps") {
    CHECK_THROWS_AS(causes(chain_d(), parse_query("Q :- R(x,x).")), PreconditionError);
    CHECK_THROWS_AS(causes(chain_d(), parse_query(kChainQuery), 6), CapExceededError);
    CHECK_NOTHROW(causes(chain_d(), parse_query(kChainQuery), 7));
}

TEST_CASE("exogenous tuples are never causes and never enter contingencies") {
    Instance db = Instance::make(
        {tup("R", {"c", "b"}), tup("R", {"a", "d"}), tup("R", {"b", "a"}), tup("S", {"a"}), tup("S", {"b"}),
         tup("S", {"c"}), tup("S", {"d"})},
        {tup("S", {"c"}), tup("S", {"d"})});
    auto reports = causes(db, parse_query(kChainQuery));
    REQUIRE(reports.size() == 5);
    for (const auto& r : reports) {
        CHECK(r.tuple != tup("S", {"c"}));
        CHECK(r.tuple != tup("S", {"d"}));
        for (const auto& g : r.min_contingencies)
            for (const auto& t : g) {
                CHECK(t != tup("S", {"c"}));
                CHECK(t != tup("S", {"d"}));
            }
    }
    // with S(c), S(d) frozen the second chain can only break at R(c,b)
    const auto& rba = report_for(reports, tup("R", {"b", "a"}));
    CHECK(rba.responsibility == Rational(1, 3));
    CHECK(as_family(rba.min_contingencies) == as_family({{tup("R", {"a", "d"}), tup("R", {"c", "b"})}}));
}

TEST_CASE("denial constraint renders the forbidden pattern and detects violations") {
    auto q = parse_query(kChainQuery);
    auto dc = cq_to_denial(q);
    CHECK(dc.text() == "!exists x,y (S(x) & R(x,y) & S(y))");
    CHECK(dc.violated(chain_d()));

    auto dc2 = cq_to_denial(parse_query("Q :- R('a',x), S(x)."));
    CHECK(dc2.text() == "!exists x (R('a',x) & S(x))");

    Instance clean = Instance::make({tup("S", {"a"}), tup("R", {"b", "c"})});
    CHECK_FALSE(dc.violated(clean));
}

TEST_CASE("abnormality atom names embed relation and values") {
    CHECK(ab_atom_name(tup("S", {"b"})) == "Ab_S_b");
    CHECK(ab_atom_name(tup("R", {"a", "d"})) == "Ab_R_a_d");
}

TEST_CASE("diagnosis encoding has one clause per homomorphism image") {
    Instance db = chain_d();
    auto enc = cbd_encoding(db, parse_query(kChainQuery));
    CHECK(enc.component_tuples == db.tuples);
    CHECK(enc.problem.components ==
          std::vector<std::string>{"Ab_R_a_d", "Ab_R_b_a", "Ab_R_c_b", "Ab_S_a", "Ab_S_b", "Ab_S_c", "Ab_S_d"});
    CHECK(enc.problem.observation.empty());
    REQUIRE(enc.problem.model.size() == 3);
    CHECK(render_formula(enc.problem.model[0]) == "Ab_R_a_d | Ab_S_a | Ab_S_d");
    CHECK(render_formula(enc.problem.model[1]) == "Ab_R_b_a | Ab_S_a | Ab_S_b");
    CHECK(render_formula(enc.problem.model[2]) == "Ab_R_c_b | Ab_S_b | Ab_S_c");
}

TEST_CASE("diagnosis encoding of a false query has no clauses") {
    auto enc = cbd_encoding(chain_d(), parse_query("Q :- R(x,x)."));
    CHECK(enc.problem.model.empty());
    CHECK(enc.problem.components.size() == 7);
    auto ds = diagnoses(enc.problem, DiagnosisMode::Minimal);
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].abnormal.empty());
}

TEST_CASE("fully exogenous image yields an unrepairable encoding") {
    Instance db = Instance::make(
        {tup("R", {"c", "b"}), tup("R", {"a", "d"}), tup("R", {"b", "a"}), tup("S", {"a"}), tup("S", {"b"}),
         tup("S", {"c"}), tup("S", {"d"})},
        {tup("S", {"a"}), tup("R", {"a", "d"}), tup("S", {"d"})});
    auto enc = cbd_encoding(db, parse_query(kChainQuery));
    REQUIRE(enc.problem.components.size() == 4);
    // the a->d chain survives every deletion, so its clause is unsatisfiable
    bool has_false = false;
    for (const auto& f : enc.problem.model) has_false = has_false || f->kind == Formula::Kind::False;
    CHECK(has_false);
    CHECK(diagnoses(enc.problem, DiagnosisMode::Minimal).empty());

    auto reports = causes(db, parse_query(kChainQuery));
    for (const auto& r : reports) CHECK(r.kind == TupleCauseReport::Kind::NotACause);
}

namespace {

// Project minimal diagnoses of the encoding back onto per-tuple cause
// reports; the smallest diagnosis through a tuple, minus that tuple, is
// exactly a minimum contingency.
std::vector<TupleCauseReport> causes_via_diagnoses(const Instance& db, const ConjunctiveQuery& q) {
    auto enc = cbd_encoding(db, q);
    auto ds = diagnoses(enc.problem, DiagnosisMode::Minimal);
    std::vector<TupleCauseReport> out;
    for (size_t ci = 0; ci < enc.component_tuples.size(); ++ci) {
        TupleCauseReport rep;
        rep.tuple = enc.component_tuples[ci];
        rep.responsibility = 0;
        size_t best = 0;
        bool found = false;
        for (const auto& d : ds) {
            if (std::find(d.abnormal.begin(), d.abnormal.end(), static_cast<int>(ci)) == d.abnormal.end())
                continue;
            if (!found || d.abnormal.size() < best) best = d.abnormal.size();
            found = true;
        }
        if (found) {
            rep.kind = best == 1 ? TupleCauseReport::Kind::Counterfactual : TupleCauseReport::Kind::Actual;
            rep.responsibility = Rational(1, static_cast<long>(best));
            for (const auto& d : ds) {
                if (d.abnormal.size() != best) continue;
                if (std::find(d.abnormal.begin(), d.abnormal.end(), static_cast<int>(ci)) == d.abnormal.end())
                    continue;
                std::vector<DbTuple> gamma;
                for (int j : d.abnormal)
                    if (j != static_cast<int>(ci)) gamma.push_back(enc.component_tuples[static_cast<size_t>(j)]);
                rep.min_contingencies.push_back(std::move(gamma));
            }
        }
        out.push_back(std::move(rep));
    }
    return out;
}

void check_same_reports(const std::vector<TupleCauseReport>& got, const std::vector<TupleCauseReport>& want) {
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].tuple == want[i].tuple);
        CHECK(got[i].kind == want[i].kind);
        CHECK(got[i].responsibility == want[i].responsibility);
        CHECK(as_family(got[i].min_contingencies) == as_family(want[i].min_contingencies));
    }
}

} // namespace

TEST_CASE("minimal diagnoses of the encoding project onto the cause reports") {
    auto q = parse_query(kChainQuery);
    for (const Instance& db : {chain_d(), chain_d_prime()})
        check_same_reports(causes_via_diagnoses(db, q), causes(db, q));
}

TEST_CASE("cause search matches exhaustive enumeration on random instances") {
    xtest::Rng rng(81);
    int checked = 0;
    while (checked < 30) {
        Instance db = xtest::random_instance(rng, 8, checked % 2 == 1);
        ConjunctiveQuery q = xtest::random_query(rng);
        if (!eval_cq(db, q).holds) continue;
        ++checked;
        check_same_reports(causes(db, q), xtest::causes_by_enumeration(db, q));
    }
}

TEST_CASE("diagnosis projection matches the cause reports on random instances") {
    xtest::Rng rng(82);
    int checked = 0;
    while (checked < 25) {
        Instance db = xtest::random_instance(rng, 8, checked % 3 == 0);
        ConjunctiveQuery q = xtest::random_query(rng);
        if (!eval_cq(db, q).holds) continue;
        ++checked;
        check_same_reports(causes_via_diagnoses(db, q), causes(db, q));
    }
}
