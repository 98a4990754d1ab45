#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xscore/formula.hpp"
#include "xscore/rational.hpp"
#include "xscore/sat.hpp"

namespace xscore {

// Consistency-based diagnosis: a system model over abnormality atoms, the
// component list (one Ab atom per component), and an observation.
struct DiagnosisProblem {
    std::vector<FormulaPtr> model;
    std::vector<std::string> components;  // Ab atom names
    std::vector<FormulaPtr> observation;
};

struct Diagnosis {
    std::vector<int> abnormal;  // sorted indices into components
    bool minimal = false;
    bool minimum = false;
};

enum class DiagnosisMode { All, Minimal, Minimum };

// Candidate sets enumerated breadth-first by cardinality with subset
// pruning; each candidate decided by one SAT call on
//   model + observation + Ab assignment (listed abnormal, rest normal).
// Pre: model + observation consistent with all components normal is NOT
// required; an empty diagnosis simply reports the system as consistent.
// Components count <= cap.
std::vector<Diagnosis> diagnoses(const DiagnosisProblem& p, DiagnosisMode mode = DiagnosisMode::Minimal,
                                 int cap = 20);

struct AbductionProblem {
    std::vector<FormulaPtr> theory;
    std::vector<std::string> hypotheses;  // candidate unit assumptions
    std::vector<FormulaPtr> observation;
};

struct AbductionResult {
    std::vector<std::vector<int>> explanations;  // sorted hypothesis indices, subset-minimal
    bool entailed_without_hypotheses = false;    // observation follows from the theory alone
};

// Subset-minimal H with theory + H |= observation and theory + H consistent.
AbductionResult abduce(const AbductionProblem& p, int cap = 20);

struct BaseLiteral {
    std::string atom;
    bool value = false;
};

// Actual causality over a propositional theory: exogenous literals are
// frozen, intervenable literals may be flipped away from their base value.
struct CausalSetting {
    std::vector<FormulaPtr> theory;
    std::vector<BaseLiteral> exogenous;
    std::vector<BaseLiteral> intervenable;
    FormulaPtr observation;
};

struct LogicalCauseReport {
    std::string atom;
    enum class Kind { Counterfactual, Actual, NotACause } kind = Kind::NotACause;
    std::vector<std::string> contingency;  // minimum-cardinality witness, lexicographic
    Rational responsibility;               // 1 / (1 + |contingency|), 0 for non-causes
};

// For each intervenable literal: flipping it together with a minimum
// contingency set of other intervenable literals must break the
// entailment of the observation, while flipping the contingency alone
// must preserve it. Pre: the base setting entails the observation.
std::vector<LogicalCauseReport> actual_causes_logical(const CausalSetting& s, int cap = 20);

} // namespace xscore
