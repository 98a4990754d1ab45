// xscore: explanation scores, model counting and diagnosis for classifiers.
//
// Exit codes: 0 success, 2 parse error, 3 precondition violated,
// 4 cap exceeded, 1 selftest failure / internal error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "xscore/causality_db.hpp"
#include "xscore/diagnosis.hpp"
#include "xscore/dtree.hpp"
#include "xscore/json_io.hpp"
#include "xscore/resp.hpp"
#include "xscore/selftest.hpp"
#include "xscore/shap.hpp"

namespace {

using namespace xscore;

struct Common {
    std::string format = "json"; // json | csv
    bool approx = false;
};

int feature_cap(int fallback) {
    const char* env = std::getenv("XSCORE_CAP_FEATURES");
    if (!env || !*env) return fallback;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end || v <= 0)
        throw PreconditionError("XSCORE_CAP_FEATURES must be a positive integer");
    return static_cast<int>(v);
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

// Entity files carry {"entity": {...}} and may embed a distribution;
// --dist overrides ("uniform" or a path to a distribution file).
struct EntityInput {
    EntityValues entity;
    Distribution dist;
};

EntityInput load_entity_input(const std::string& path, const std::string& dist_arg, const Schema& s) {
    OrderedJson j = read_json_file(path);
    EntityInput in;
    if (!j.is_object() || !j.contains("entity")) throw ParseError("'" + path + "': expected an 'entity' object");
    in.entity = entity_from_json(j["entity"], s);
    if (!dist_arg.empty()) {
        if (dist_arg == "uniform")
            in.dist = Distribution::uniform();
        else
            in.dist = distribution_from_json(read_json_file(dist_arg), s);
    } else if (j.contains("distribution")) {
        in.dist = distribution_from_json(j["distribution"], s);
    } else {
        in.dist = Distribution::uniform();
    }
    return in;
}

void print_score_report(const ScoreReport& r, const Schema& s, const Common& c) {
    if (c.format == "csv")
        std::cout << score_report_to_csv(r, s, c.approx);
    else
        emit(score_report_to_json(r, s, c.approx));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"explanation-score workbench for boolean classifiers"};
    app.require_subcommand(1);

    Common common;

    // ---- eval ----
    std::string eval_model, eval_entity;
    auto* cmd_eval = app.add_subcommand("eval", "evaluate a classifier on an entity");
    cmd_eval->add_option("model", eval_model, "classifier JSON (circuit, tree or table)")->required();
    cmd_eval->add_option("entity", eval_entity, "entity JSON")->required();

    // ---- count ----
    std::string count_model, count_mode = "exact", count_entity;
    auto* cmd_count = app.add_subcommand("count", "model counting over the circuit variables");
    cmd_count->add_option("model", count_model, "circuit JSON")->required();
    cmd_count->add_option("--mode", count_mode, "exact | brute | by-distance")
        ->check(CLI::IsMember({"exact", "brute", "by-distance"}));
    cmd_count->add_option("--entity", count_entity, "entity JSON (required for by-distance)");

    // ---- shap ----
    std::string shap_model, shap_entity, shap_dist, shap_method = "exact";
    auto* cmd_shap = app.add_subcommand("shap", "Shap explanation scores");
    cmd_shap->add_option("model", shap_model, "classifier JSON")->required();
    cmd_shap->add_option("entity", shap_entity, "entity JSON")->required();
    cmd_shap->add_option("--dist", shap_dist, "'uniform' or distribution JSON path");
    cmd_shap->add_option("--method", shap_method, "exact | brute")->check(CLI::IsMember({"exact", "brute"}));
    cmd_shap->add_flag("--approx", common.approx, "add decimal approximations");
    cmd_shap->add_option("--format", common.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    // ---- resp ----
    std::string resp_model, resp_entity, resp_dist;
    std::vector<std::string> resp_features;
    bool resp_include_original = false;
    int resp_label = 1;
    auto* cmd_resp = app.add_subcommand("resp", "responsibility scores with contingency search");
    cmd_resp->add_option("model", resp_model, "classifier JSON")->required();
    cmd_resp->add_option("entity", resp_entity, "entity JSON")->required();
    cmd_resp->add_option("--feature", resp_features, "feature to score (repeatable; default: all)");
    cmd_resp->add_option("--dist", resp_dist, "'uniform' or distribution JSON path");
    cmd_resp->add_option("--label", resp_label, "label of interest (default 1)")
        ->check(CLI::IsMember({0, 1}));
    cmd_resp->add_flag("--include-original", resp_include_original,
                       "average over the full domain instead of dropping the entity's value");
    cmd_resp->add_flag("--approx", common.approx, "add decimal approximations");
    cmd_resp->add_option("--format", common.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    // ---- causes ----
    std::string causes_instance, causes_query;
    bool causes_approx = false;
    auto* cmd_causes = app.add_subcommand("causes", "actual causes of a conjunctive query answer");
    cmd_causes->add_option("instance", causes_instance, "instance JSON")->required();
    cmd_causes->add_option("--query", causes_query, "conjunctive query, e.g. 'Q :- S(x), R(x,y), S(y).'")
        ->required();
    cmd_causes->add_flag("--approx", causes_approx, "add decimal approximations");

    // ---- diagnose ----
    std::string diag_problem, diag_mode = "minimal";
    auto* cmd_diag = app.add_subcommand("diagnose", "consistency-based diagnoses");
    cmd_diag->add_option("problem", diag_problem, "diagnosis problem JSON")->required();
    cmd_diag->add_option("--mode", diag_mode, "all | minimal | minimum")
        ->check(CLI::IsMember({"all", "minimal", "minimum"}));

    // ---- abduce ----
    std::string abd_problem;
    auto* cmd_abduce = app.add_subcommand("abduce", "subset-minimal abductive explanations");
    cmd_abduce->add_option("problem", abd_problem, "abduction problem JSON")->required();

    // ---- compile ----
    std::string comp_tree, comp_out;
    bool comp_verify = false;
    auto* cmd_compile = app.add_subcommand("compile", "compile a decision tree into a certified circuit");
    cmd_compile->add_option("tree", comp_tree, "decision tree JSON")->required();
    cmd_compile->add_option("--out", comp_out, "write the circuit JSON here")->required();
    cmd_compile->add_flag("--verify", comp_verify, "re-run the certification checks on the result");

    // ---- selftest ----
    uint64_t selftest_seed = 0;
    auto* cmd_selftest = app.add_subcommand("selftest", "built-in regression suite");
    cmd_selftest->add_option("--seed", selftest_seed, "seed for the randomized property demos");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*cmd_eval) {
            Classifier cl = classifier_from_json(read_json_file(eval_model));
            EntityInput in = load_entity_input(eval_entity, "", cl.schema());
            Json out;
            out["label"] = cl.label(in.entity) ? 1 : 0;
            emit(out);
        } else if (*cmd_count) {
            Circuit c = circuit_from_json(read_json_file(count_model));
            Json out;
            if (count_mode == "exact") {
                if (!c.certified_ddbc()) {
                    check_decomposable(c);
                    check_deterministic(c, feature_cap(20));
                }
                out["count"] = to_string(model_count(c));
            } else if (count_mode == "brute") {
                out["count"] = to_string(brute_force_count(c, feature_cap(20)));
            } else {
                if (count_entity.empty())
                    throw PreconditionError("count --mode by-distance needs --entity");
                if (!c.certified_ddbc()) {
                    check_decomposable(c);
                    check_deterministic(c, feature_cap(20));
                }
                Classifier cl = Classifier::from_circuit(c);
                EntityInput in = load_entity_input(count_entity, "", cl.schema());
                DistanceCounts dc = count_by_distance(cl.circuit(), to_bits(cl.schema(), in.entity));
                Json arr = Json::array();
                for (const auto& n : dc.counts) arr.push_back(to_string(n));
                out["by_distance"] = std::move(arr);
                Json scope = Json::array();
                for (FeatureId f : dc.scope) scope.push_back(cl.circuit().feature_name(f));
                out["scope"] = std::move(scope);
            }
            emit(out);
        } else if (*cmd_shap) {
            Classifier cl = classifier_from_json(read_json_file(shap_model));
            EntityInput in = load_entity_input(shap_entity, shap_dist, cl.schema());
            ScoreReport r;
            if (shap_method == "exact") {
                if (cl.has_circuit()) {
                    Circuit work = cl.circuit();
                    if (!work.certified_ddbc()) {
                        check_decomposable(work);
                        check_deterministic(work, feature_cap(20));
                        cl = Classifier::from_circuit(std::move(work));
                    }
                } else {
                    // binary trees are compiled on the fly; tables cannot be
                    OrderedJson j = read_json_file(shap_model);
                    if (!j.contains("nodes"))
                        throw PreconditionError("shap --method exact needs a circuit or tree classifier");
                    DecisionTree dt = dt_from_json(j);
                    if (!dt.schema.is_binary())
                        throw PreconditionError(
                            "shap --method exact needs binary features; use --method brute for general domains");
                    cl = Classifier::from_circuit(compile_dt(dt));
                    in = load_entity_input(shap_entity, shap_dist, cl.schema());
                }
                r = shap_exact(cl, in.entity, in.dist);
            } else {
                r = shap_brute(cl, in.entity, in.dist, feature_cap(14));
            }
            print_score_report(r, cl.schema(), common);
        } else if (*cmd_resp) {
            Classifier cl = classifier_from_json(read_json_file(resp_model));
            EntityInput in = load_entity_input(resp_entity, resp_dist, cl.schema());
            RespOptions opt;
            opt.label_of_interest = resp_label;
            opt.include_original_value = resp_include_original;

            std::vector<int> targets;
            if (resp_features.empty()) {
                for (int f = 0; f < cl.schema().size(); ++f) targets.push_back(f);
            } else {
                for (const auto& name : resp_features) {
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
            print_score_report(r, cl.schema(), common);
        } else if (*cmd_causes) {
            Instance db = instance_from_json(read_json_file(causes_instance));
            ConjunctiveQuery q = parse_query(causes_query);
            emit(causes_to_json(causes(db, q, feature_cap(20)), causes_approx));
        } else if (*cmd_diag) {
            DiagnosisProblem p = diagnosis_problem_from_json(read_json_file(diag_problem));
            DiagnosisMode mode = diag_mode == "all"       ? DiagnosisMode::All
                                 : diag_mode == "minimum" ? DiagnosisMode::Minimum
                                                          : DiagnosisMode::Minimal;
            emit(diagnoses_to_json(diagnoses(p, mode, feature_cap(20)), p.components));
        } else if (*cmd_abduce) {
            AbductionProblem p = abduction_problem_from_json(read_json_file(abd_problem));
            emit(abduction_to_json(abduce(p, feature_cap(20)), p.hypotheses));
        } else if (*cmd_compile) {
            DecisionTree dt = dt_from_json(read_json_file(comp_tree));
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
            if (comp_verify) {
                Circuit check = c;
                check.decomposable = TriState::Unchecked;
                check.deterministic = TriState::Unchecked;
                check.certification = Certification::None;
                DecomposabilityVerdict dv = check_decomposable(check);
                DeterminismVerdict tv = check_deterministic(check, feature_cap(20));
                report["verified_decomposable"] = dv.ok;
                report["verified_deterministic"] = tv.kind == DeterminismVerdict::Kind::Ok;
            }
            std::ofstream out(comp_out);
            if (!out) throw PreconditionError("cannot write '" + comp_out + "'");
            out << circuit_to_json(c).dump(2) << "\n";
            emit(report);
        } else if (*cmd_selftest) {
            return run_selftest(std::cout, selftest_seed) ? 0 : 1;
        }
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const CapExceededError& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 4;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
