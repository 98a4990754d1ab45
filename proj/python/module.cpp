// Python surface of the workbench: thin wrappers that speak JSON text.
// Structured inputs and reports travel as JSON strings (the package
// __init__ turns them into dicts); rationals stay canonical "p/q".

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "xscore/causality_db.hpp"
#include "xscore/diagnosis.hpp"
#include "xscore/dtree.hpp"
#include "xscore/json_io.hpp"
#include "xscore/resp.hpp"
#include "xscore/selftest.hpp"
#include "xscore/shap.hpp"

namespace py = pybind11;
using namespace xscore;

namespace {

// Entity payloads may be the bare value map or the file shape
// {"entity": {...}, "distribution": {...}?}. An explicit distribution
// argument wins over an embedded one; empty text means uniform.
struct EntityInput {
    EntityValues entity;
    Distribution dist;
};

EntityInput load_entity(const std::string& entity_text, const std::string& dist_text, const Schema& s) {
    OrderedJson j = parse_json_text(entity_text, "entity");
    EntityInput in;
    const OrderedJson& obj = j.is_object() && j.contains("entity") ? j["entity"] : j;
    in.entity = entity_from_json(obj, s);
    if (!dist_text.empty())
        in.dist = distribution_from_json(parse_json_text(dist_text, "distribution"), s);
    else if (j.is_object() && j.contains("distribution"))
        in.dist = distribution_from_json(j["distribution"], s);
    else
        in.dist = Distribution::uniform();
    return in;
}

Circuit checked_circuit(Circuit c, int cap) {
    if (!c.certified_ddbc()) {
        check_decomposable(c);
        check_deterministic(c, cap);
    }
    return c;
}

int py_label(const std::string& classifier_text, const std::string& entity_text) {
    Classifier cl = classifier_from_json(parse_json_text(classifier_text, "classifier"));
    EntityInput in = load_entity(entity_text, "", cl.schema());
    return cl.label(in.entity) ? 1 : 0;
}

std::string py_count(const std::string& circuit_text, const std::string& mode, int cap) {
    Circuit c = circuit_from_json(parse_json_text(circuit_text, "circuit"));
    if (mode == "exact") return to_string(model_count(checked_circuit(std::move(c), cap)));
    if (mode == "brute") return to_string(brute_force_count(c, cap));
    throw PreconditionError("count mode must be 'exact' or 'brute'");
}

std::string py_count_by_distance(const std::string& circuit_text, const std::string& entity_text, int cap) {
    Circuit c = checked_circuit(circuit_from_json(parse_json_text(circuit_text, "circuit")), cap);
    Classifier cl = Classifier::from_circuit(std::move(c));
    EntityInput in = load_entity(entity_text, "", cl.schema());
    DistanceCounts dc = count_by_distance(cl.circuit(), to_bits(cl.schema(), in.entity));
    Json out;
    Json arr = Json::array();
    for (const auto& n : dc.counts) arr.push_back(to_string(n));
    out["by_distance"] = std::move(arr);
    Json scope = Json::array();
    for (FeatureId f : dc.scope) scope.push_back(cl.circuit().feature_name(f));
    out["scope"] = std::move(scope);
    return out.dump(2);
}

std::string py_shap(const std::string& classifier_text, const std::string& entity_text,
                    const std::string& dist_text, const std::string& method, bool approx, int cap) {
    OrderedJson j = parse_json_text(classifier_text, "classifier");
    Classifier cl = classifier_from_json(j);
    EntityInput in = load_entity(entity_text, dist_text, cl.schema());
    ScoreReport r;
    if (method == "exact") {
        if (cl.has_circuit()) {
            cl = Classifier::from_circuit(checked_circuit(cl.circuit(), cap));
        } else if (j.contains("nodes")) {
            DecisionTree dt = dt_from_json(j);
            if (!dt.schema.is_binary())
                throw PreconditionError("shap 'exact' needs binary features; use 'brute' for general domains");
            cl = Classifier::from_circuit(compile_dt(dt));
            in = load_entity(entity_text, dist_text, cl.schema());
        } else {
            throw PreconditionError("shap 'exact' needs a circuit or tree classifier");
        }
        r = shap_exact(cl, in.entity, in.dist);
    } else if (method == "brute") {
        r = shap_brute(cl, in.entity, in.dist, cap);
    } else {
        throw PreconditionError("shap method must be 'exact' or 'brute'");
    }
    return score_report_to_json(r, cl.schema(), approx).dump(2);
}

std::string py_resp(const std::string& classifier_text, const std::string& entity_text,
                    const std::string& dist_text, const std::vector<std::string>& features,
                    int label_of_interest, bool include_original, bool approx) {
    Classifier cl = classifier_from_json(parse_json_text(classifier_text, "classifier"));
    EntityInput in = load_entity(entity_text, dist_text, cl.schema());
    RespOptions opt;
    opt.label_of_interest = label_of_interest;
    opt.include_original_value = include_original;

    std::vector<int> targets;
    if (features.empty()) {
        for (int f = 0; f < cl.schema().size(); ++f) targets.push_back(f);
    } else {
        for (const auto& name : features) {
            int f = cl.schema().index_of(name);
            if (f < 0) throw PreconditionError("unknown feature '" + name + "'");
            targets.push_back(f);
        }
    }
    ScoreReport r;
    r.method = "resp";
    r.distribution = in.dist.kind_name();
    for (int f : targets) {
        RespResult res = resp_global(cl, in.entity, f, in.dist, opt);
        r.entries.push_back({cl.schema().names[static_cast<size_t>(f)], res.score, res.witness});
    }
    return score_report_to_json(r, cl.schema(), approx).dump(2);
}

std::string py_causes(const std::string& instance_text, const std::string& query, bool approx, int cap) {
    Instance db = instance_from_json(parse_json_text(instance_text, "instance"));
    return causes_to_json(causes(db, parse_query(query), cap), approx).dump(2);
}

std::string py_diagnose(const std::string& problem_text, const std::string& mode, int cap) {
    DiagnosisProblem p = diagnosis_problem_from_json(parse_json_text(problem_text, "problem"));
    DiagnosisMode m = mode == "all"       ? DiagnosisMode::All
                      : mode == "minimum" ? DiagnosisMode::Minimum
                      : mode == "minimal" ? DiagnosisMode::Minimal
                                          : throw PreconditionError("diagnose mode must be 'all', 'minimal' or 'minimum'");
    return diagnoses_to_json(diagnoses(p, m, cap), p.components).dump(2);
}

std::string py_abduce(const std::string& problem_text, int cap) {
    AbductionProblem p = abduction_problem_from_json(parse_json_text(problem_text, "problem"));
    return abduction_to_json(abduce(p, cap), p.hypotheses).dump(2);
}

std::string py_compile(const std::string& tree_text, bool verify, int cap) {
    DecisionTree dt = dt_from_json(parse_json_text(tree_text, "tree"));
    bool binarized = false;
    if (!dt.schema.is_binary()) {
        dt = binarize_dt(dt);
        binarized = true;
    }
    Circuit c = compile_dt(dt);
    Json report;
    report["gates"] = c.num_gates();
    report["features"] = c.num_features();
    report["binarized"] = binarized;
    report["certification"] = "by-construction";
    if (verify) {
        Circuit check = c;
        check.decomposable = TriState::Unchecked;
        check.deterministic = TriState::Unchecked;
        check.certification = Certification::None;
        report["verified_decomposable"] = check_decomposable(check).ok;
        report["verified_deterministic"] = check_deterministic(check, cap).kind == DeterminismVerdict::Kind::Ok;
    }
    Json out;
    out["circuit"] = circuit_to_json(c);
    out["report"] = std::move(report);
    return out.dump(2);
}

std::pair<bool, std::string> py_selftest(uint64_t seed) {
    std::ostringstream out;
    bool ok = run_selftest(out, seed);
    return {ok, out.str()};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact explanation scores, model counting and diagnosis for classifiers";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<CapExceededError>(m, "CapExceededError", PyExc_RuntimeError);

    m.def("label", &py_label, py::arg("classifier"), py::arg("entity"),
          "Label (0/1) of an entity under a classifier; both JSON text.");
    m.def("count", &py_count, py::arg("circuit"), py::arg("mode") = "exact", py::arg("cap") = 20,
          "Model count of a circuit as a decimal string; mode 'exact' or 'brute'.");
    m.def("count_by_distance", &py_count_by_distance, py::arg("circuit"), py::arg("entity"),
          py::arg("cap") = 20, "Distance-stratified model counts around an entity, as JSON text.");
    m.def("shap", &py_shap, py::arg("classifier"), py::arg("entity"), py::arg("distribution") = "",
          py::arg("method") = "exact", py::arg("approx") = false, py::arg("cap") = 14,
          "Shap score report as JSON text; scores are canonical 'p/q' strings.");
    m.def("resp", &py_resp, py::arg("classifier"), py::arg("entity"), py::arg("distribution") = "",
          py::arg("features") = std::vector<std::string>{}, py::arg("label_of_interest") = 1,
          py::arg("include_original") = false, py::arg("approx") = false,
          "Responsibility score report (with contingency witnesses) as JSON text.");
    m.def("causes", &py_causes, py::arg("instance"), py::arg("query"), py::arg("approx") = false,
          py::arg("cap") = 20, "Actual causes of a conjunctive query in an instance, as JSON text.");
    m.def("diagnose", &py_diagnose, py::arg("problem"), py::arg("mode") = "minimal", py::arg("cap") = 20,
          "Consistency-based diagnoses as JSON text; mode 'all', 'minimal' or 'minimum'.");
    m.def("abduce", &py_abduce, py::arg("problem"), py::arg("cap") = 20,
          "Subset-minimal abductive explanations as JSON text.");
    m.def("compile_tree", &py_compile, py::arg("tree"), py::arg("verify") = false, py::arg("cap") = 20,
          "Compile a decision tree into a certified circuit; returns {'circuit', 'report'} JSON text.");
    m.def("selftest", &py_selftest, py::arg("seed") = 0,
          "Run the built-in regression suite; returns (ok, transcript).");
}
