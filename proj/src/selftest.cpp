#include "xscore/selftest.hpp"

#include <functional>
#include <random>
#include <set>

#include "xscore/causality_db.hpp"
#include "xscore/diagnosis.hpp"
#include "xscore/dtree.hpp"
#include "xscore/json_io.hpp"
#include "xscore/resp.hpp"
#include "xscore/shap.hpp"

namespace xscore {

namespace {

struct Harness {
    std::ostream& out;
    int passed = 0, failed = 0;

    void check(const std::string& name, bool ok) {
        out << (ok ? "  ok  " : " FAIL ") << name << "\n";
        (ok ? passed : failed)++;
    }
};

const char* kMonotoneDt = R"json({
  "schema": {"x1": ["0","1"], "x2": ["0","1"], "x3": ["0","1"]},
  "nodes": [
    {"id": 0, "leaf": 0},
    {"id": 1, "leaf": 1},
    {"id": 2, "feature": "x3", "branches": {"0": 0, "1": 1}},
    {"id": 3, "feature": "x1", "branches": {"0": 0, "1": 2}},
    {"id": 4, "feature": "x2", "branches": {"0": 3, "1": 1}}
  ],
  "root": 4
})json";

const char* kLoanTable = R"json({
  "schema": {"Age": ["18","25"], "Income": ["70K","80K"], "Location": ["harlem","brooklyn"]},
  "table": [
    {"values": {"Age":"18","Income":"70K","Location":"harlem"},   "label": 1},
    {"values": {"Age":"18","Income":"70K","Location":"brooklyn"}, "label": 1},
    {"values": {"Age":"18","Income":"80K","Location":"harlem"},   "label": 1},
    {"values": {"Age":"18","Income":"80K","Location":"brooklyn"}, "label": 0},
    {"values": {"Age":"25","Income":"70K","Location":"harlem"},   "label": 0},
    {"values": {"Age":"25","Income":"70K","Location":"brooklyn"}, "label": 0},
    {"values": {"Age":"25","Income":"80K","Location":"harlem"},   "label": 0},
    {"values": {"Age":"25","Income":"80K","Location":"brooklyn"}, "label": 0}
  ]
})json";

const char* kInstanceD = R"json({
  "relations": {"R": [["c","b"],["a","d"],["b","a"]], "S": [["a"],["b"],["c"],["d"]]}
})json";

const char* kInstanceDPrime = R"json({
  "relations": {"R": [["c","b"],["a","d"],["b","b"]], "S": [["a"],["b"],["c"]]}
})json";

DecisionTree random_tree(std::mt19937_64& rng, int features, int max_depth) {
    DecisionTree dt;
    for (int f = 0; f < features; ++f) {
        dt.schema.names.push_back("x" + std::to_string(f + 1));
        dt.schema.domains.push_back({"0", "1"});
    }
    std::function<int(std::vector<int>, int)> grow = [&](std::vector<int> avail, int depth) -> int {
        std::uniform_int_distribution<int> coin(0, 3);
        if (avail.empty() || depth >= max_depth || coin(rng) == 0) {
            DtNode leaf;
            leaf.leaf = true;
            leaf.label = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
            dt.nodes.push_back(leaf);
            return static_cast<int>(dt.nodes.size()) - 1;
        }
        std::uniform_int_distribution<size_t> pick(0, avail.size() - 1);
        size_t at = pick(rng);
        int f = avail[at];
        avail.erase(avail.begin() + static_cast<long>(at));
        int lo = grow(avail, depth + 1);
        int hi = grow(avail, depth + 1);
        DtNode n;
        n.feature = f;
        n.branches = {lo, hi};
        dt.nodes.push_back(n);
        return static_cast<int>(dt.nodes.size()) - 1;
    };
    std::vector<int> avail;
    for (int f = 0; f < features; ++f) avail.push_back(f);
    dt.root = grow(avail, 0);
    return dt;
}

} // namespace

bool run_selftest(std::ostream& out, uint64_t seed) {
    Harness h{out};

    // ---- circuit + compile over the two-clause monotone formula ----
    CnfFormula cnf = parse_dimacs("p cnf 3 2\n1 2 0\n2 3 0\n");
    Circuit raw = cnf_to_circuit(cnf);
    h.check("cnf circuit brute count = 5", brute_force_count(raw) == 5);
    {
        std::set<std::vector<int>> expect = {{1, 1, 1}, {1, 0, 1}, {0, 1, 1}, {0, 1, 0}, {1, 1, 0}};
        std::set<std::vector<int>> got;
        for (int m = 0; m < 8; ++m) {
            BitEntity e = {static_cast<uint8_t>(m & 1), static_cast<uint8_t>((m >> 1) & 1),
                           static_cast<uint8_t>((m >> 2) & 1)};
            if (eval(raw, e)) got.insert({e[0], e[1], e[2]});
        }
        h.check("five satisfying assignments", got == expect);
    }

    DecisionTree dt = dt_from_json(parse_json_text(kMonotoneDt, "selftest tree"));
    Circuit ddbc = compile_dt(dt);
    h.check("compiled tree is certified", ddbc.certified_ddbc());
    h.check("compiled model count = 5", model_count(ddbc) == 5);
    {
        bool agree = true;
        for (int m = 0; m < 8 && agree; ++m) {
            std::vector<int> e = {m & 1, (m >> 1) & 1, (m >> 2) & 1};
            BitEntity bits = {static_cast<uint8_t>(e[0]), static_cast<uint8_t>(e[1]),
                              static_cast<uint8_t>(e[2])};
            agree = eval(ddbc, bits) == dt.evaluate(e) && eval(ddbc, bits) == eval(raw, bits);
        }
        h.check("tree, circuit and formula agree", agree);
    }

    Classifier cl = Classifier::from_circuit(ddbc);
    EntityValues e1 = {1, 0, 1}; // label 1
    EntityValues e2 = {1, 0, 0}; // label 0
    h.check("labels at the two entities", cl.label(e1) && !cl.label(e2));

    // ---- shap scores under uniform ----
    {
        ScoreReport exact = shap_exact(cl, e1, Distribution::uniform());
        ScoreReport brute = shap_brute(cl, e1, Distribution::uniform());
        bool same = exact.entries.size() == brute.entries.size();
        for (size_t i = 0; same && i < exact.entries.size(); ++i)
            same = exact.entries[i].score == brute.entries[i].score;
        h.check("shap exact equals shap brute", same);
        h.check("shap total = 3/8 at the positive entity", exact.total() == Rational(3, 8));

        RedIdentityReport red1 = verify_red_identity(cl, e1);
        RedIdentityReport red2 = verify_red_identity(cl, e2);
        h.check("count identity at both entities", red1.holds && red2.holds && red1.model_count_full == 5);
    }

    // ---- consistency-based diagnosis (two-gate system) ----
    {
        DiagnosisProblem p = diagnosis_problem_from_json(parse_json_text(R"json({
            "model": ["!AbA -> (x <-> (a & b))", "!AbO -> (d <-> (x | c))"],
            "components": ["AbA", "AbO"],
            "observation": ["a", "!b", "c", "!d"]
        })json", "selftest diagnosis"));
        auto minimal = diagnoses(p, DiagnosisMode::Minimal);
        bool one = minimal.size() == 1 && minimal[0].abnormal == std::vector<int>{1} && minimal[0].minimum;
        h.check("single minimal diagnosis {AbO}", one);
        auto all = diagnoses(p, DiagnosisMode::All);
        bool super = false;
        for (const auto& d : all)
            if (d.abnormal == std::vector<int>{0, 1} && !d.minimal) super = true;
        h.check("{AbA,AbO} diagnoses but is not minimal", super && all.size() == 2);
    }

    // ---- abduction: strong vs weak fault models ----
    {
        AbductionProblem strong = abduction_problem_from_json(parse_json_text(R"json({
            "theory": ["a & b & AbA -> !x", "x & AbO -> !d", "c & AbO -> !d", "a", "!b", "c"],
            "hypotheses": ["AbA", "AbO"],
            "observation": ["!d"]
        })json", "selftest abduction"));
        AbductionResult r = abduce(strong);
        h.check("strong model explains with {AbO}",
                r.explanations.size() == 1 && r.explanations[0] == std::vector<int>{1});

        AbductionProblem weak = abduction_problem_from_json(parse_json_text(R"json({
            "theory": ["!AbA -> (x <-> (a & b))", "!AbO -> (d <-> (x | c))", "a", "!b", "c"],
            "hypotheses": ["AbA", "AbO"],
            "observation": ["!d"]
        })json", "selftest abduction"));
        h.check("weak model yields no explanation", abduce(weak).explanations.empty());

        AbductionProblem covid = abduction_problem_from_json(parse_json_text(R"json({
            "theory": ["Covid19 -> Breathlessness"],
            "hypotheses": ["Covid19"],
            "observation": ["Breathlessness"]
        })json", "selftest abduction"));
        AbductionResult rc = abduce(covid);
        h.check("single-rule abduction", rc.explanations.size() == 1 && rc.explanations[0] == std::vector<int>{0});
    }

    // ---- logical actual causes over the strong fault model ----
    {
        CausalSetting s;
        s.theory = {parse_formula("a & b & AbA -> !x"), parse_formula("x & AbO -> !d"),
                    parse_formula("c & AbO -> !d")};
        s.exogenous = {{"a", true}, {"b", false}, {"c", true}};
        s.intervenable = {{"AbA", false}, {"AbO", true}};
        s.observation = parse_formula("!d");
        auto reports = actual_causes_logical(s);
        bool abA_ok = reports[0].kind == LogicalCauseReport::Kind::NotACause && reports[0].responsibility == 0;
        bool abO_ok = reports[1].kind == LogicalCauseReport::Kind::Counterfactual && reports[1].responsibility == 1;
        h.check("AbO counterfactual, AbA not a cause", abA_ok && abO_ok);
    }

    // ---- relational causality ----
    {
        ConjunctiveQuery q = parse_query("Q :- S(x), R(x,y), S(y).");
        Instance d = instance_from_json(parse_json_text(kInstanceD, "selftest instance"));
        h.check("query holds on the first instance", eval_cq(d, q).holds);
        auto reps = causes(d, q);
        const TupleCauseReport* sb = nullptr;
        for (const auto& r : reps)
            if (r.tuple.relation == "S" && r.tuple.values == std::vector<std::string>{"b"}) sb = &r;
        bool sb_ok = sb && sb->kind == TupleCauseReport::Kind::Actual && sb->responsibility == Rational(1, 2);
        bool sb_gamma = sb && !sb->min_contingencies.empty();
        if (sb_gamma) {
            bool found = false;
            for (const auto& g : sb->min_contingencies)
                if (g.size() == 1 && g[0].relation == "S" && g[0].values == std::vector<std::string>{"a"})
                    found = true;
            sb_gamma = found;
        }
        h.check("S(b) actual cause, resp 1/2, contingency {S(a)}", sb_ok && sb_gamma);

        Instance dp = instance_from_json(parse_json_text(kInstanceDPrime, "selftest instance"));
        auto reps2 = causes(dp, q);
        const TupleCauseReport *sb2 = nullptr, *sc2 = nullptr;
        for (const auto& r : reps2) {
            if (r.tuple.relation == "S" && r.tuple.values == std::vector<std::string>{"b"}) sb2 = &r;
            if (r.tuple.relation == "S" && r.tuple.values == std::vector<std::string>{"c"}) sc2 = &r;
        }
        h.check("after the swap S(b) is counterfactual",
                sb2 && sb2->kind == TupleCauseReport::Kind::Counterfactual && sb2->responsibility == 1);
        bool sc_ok = sc2 && sc2->kind == TupleCauseReport::Kind::Actual && sc2->responsibility == Rational(1, 2);
        if (sc_ok) {
            bool rbb = false;
            for (const auto& g : sc2->min_contingencies)
                if (g.size() == 1 && g[0].relation == "R" && g[0].values == std::vector<std::string>{"b", "b"})
                    rbb = true;
            sc_ok = rbb;
        }
        h.check("S(c) actual with contingency {R(b,b)}", sc_ok);

        // diagnosis encoding agrees with direct cause computation
        CbdEncoding enc = cbd_encoding(dp, q);
        auto ds = diagnoses(enc.problem, DiagnosisMode::Minimal);
        std::set<DbTuple> via_diag;
        for (const auto& diag : ds)
            for (int i : diag.abnormal) via_diag.insert(enc.component_tuples[static_cast<size_t>(i)]);
        std::set<DbTuple> via_causes;
        for (const auto& r : reps2)
            if (r.kind != TupleCauseReport::Kind::NotACause) via_causes.insert(r.tuple);
        h.check("diagnosis encoding recovers the cause set", via_diag == via_causes);
    }

    // ---- responsibility on the loan table ----
    {
        Classifier loan = classifier_from_json(parse_json_text(kLoanTable, "selftest table"));
        EntityValues e = {0, 0, 0}; // <18, 70K, harlem>
        Distribution u = Distribution::uniform();
        RespResult age = resp_global(loan, e, 0, u);
        RespResult income = resp_global(loan, e, 1, u);
        RespResult location = resp_global(loan, e, 2, u);
        h.check("age counterfactual with responsibility 1",
                age.score == 1 && age.witness && age.witness->features.empty());
        bool income_ok = income.score == Rational(1, 2) && income.witness &&
                         income.witness->features == std::vector<int>{2};
        h.check("income responsibility 1/2 via location", income_ok);
        h.check("location responsibility 1/2", location.score == Rational(1, 2));
    }

    // ---- seeded property demos ----
    {
        std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 1);
        bool counts_ok = true, shap_ok = true;
        for (int round = 0; round < 3; ++round) {
            DecisionTree t = random_tree(rng, 6, 5);
            Circuit c = compile_dt(t);
            counts_ok = counts_ok && model_count(c) == brute_force_count(c);
            Classifier tc = Classifier::from_circuit(c);
            EntityValues e;
            for (int f = 0; f < 6; ++f) e.push_back(std::uniform_int_distribution<int>(0, 1)(rng));
            ScoreReport ex = shap_exact(tc, e, Distribution::uniform());
            ScoreReport br = shap_brute(tc, e, Distribution::uniform());
            for (size_t i = 0; i < ex.entries.size(); ++i)
                shap_ok = shap_ok && ex.entries[i].score == br.entries[i].score;
        }
        h.check("random trees: exact counting matches enumeration", counts_ok);
        h.check("random trees: exact shap matches brute shap", shap_ok);
    }

    out << (h.failed == 0 ? "selftest: all " : "selftest: FAILURES, ") << h.passed << " passed, " << h.failed
        << " failed\n";
    return h.failed == 0;
}

} // namespace xscore
