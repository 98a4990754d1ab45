#pragma once

#include <json.hpp>

#include <string>

#include "xscore/causality_db.hpp"
#include "xscore/classifier.hpp"
#include "xscore/diagnosis.hpp"
#include "xscore/score_report.hpp"

namespace xscore {

using OrderedJson = nlohmann::ordered_json;  // input side: key order is data
using Json = nlohmann::json;                 // output side: keys sorted, stable bytes

OrderedJson read_json_file(const std::string& path);
OrderedJson parse_json_text(const std::string& text, const std::string& what);

Circuit circuit_from_json(const OrderedJson& j);
Json circuit_to_json(const Circuit& c);

Schema schema_from_json(const OrderedJson& j);
DecisionTree dt_from_json(const OrderedJson& j);

// Dispatch on shape: "gates" = circuit, "nodes" = decision tree,
// "table" = explicit label table.
Classifier classifier_from_json(const OrderedJson& j);

EntityValues entity_from_json(const OrderedJson& entity_obj, const Schema& s);
Distribution distribution_from_json(const OrderedJson& j, const Schema& s);

Instance instance_from_json(const OrderedJson& j);

DiagnosisProblem diagnosis_problem_from_json(const OrderedJson& j);
AbductionProblem abduction_problem_from_json(const OrderedJson& j);

Json score_report_to_json(const ScoreReport& r, const Schema& s, bool approx);
std::string score_report_to_csv(const ScoreReport& r, const Schema& s, bool approx);

Json causes_to_json(const std::vector<TupleCauseReport>& reports, bool approx);
Json diagnoses_to_json(const std::vector<Diagnosis>& ds, const std::vector<std::string>& components);
Json abduction_to_json(const AbductionResult& r, const std::vector<std::string>& hypotheses);

} // namespace xscore
