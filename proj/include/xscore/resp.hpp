#pragma once

#include <functional>

#include "xscore/classifier.hpp"
#include "xscore/score_report.hpp"

namespace xscore {

struct RespOptions {
    // Scores explain this label; entities carrying the other label are
    // handled by complementing the classifier internally.
    int label_of_interest = 1;

    // Default drops the entity's own value from the counterfactual
    // expectation (renormalizing); set to average over the full domain.
    bool include_original_value = false;

    // Default weights replacement values by the distribution's marginal
    // for the feature; set to force uniform weights instead.
    bool uniform_expectation = false;

    // Admissibility predicate over modified entities; filters both
    // contingency assignments and replacement values. Null admits all.
    std::function<bool(const EntityValues&)> admissible;

    int max_contingency = -1;               // -1: all cardinalities up to n-1
    long long enumeration_budget = 4000000; // candidate (contingency, assignment) pairs
};

// Local responsibility of feature f_star at e under a fixed contingency:
// (1 - E[label after replacing f_star]) / (1 + |contingency|).
// Pre: the entity and the contingency-modified entity both carry the
// label of interest.
Rational resp_local(const Classifier& c, const EntityValues& e, int f_star,
                    const ContingencyWitness& contingency, const Distribution& d,
                    const RespOptions& opt = {});

struct RespResult {
    Rational score;                              // 0 when no contingency works
    std::optional<ContingencyWitness> witness;   // first maximizer, lexicographic
};

// Global responsibility: breadth-first search over contingency sets by
// cardinality; at the first cardinality admitting a positive local score,
// returns the maximum over that cardinality.
RespResult resp_global(const Classifier& c, const EntityValues& e, int f_star, const Distribution& d,
                       const RespOptions& opt = {});

struct CauseVerdict {
    enum class Kind { Counterfactual, Actual, NotACause } kind = Kind::NotACause;
    Rational responsibility;
    std::optional<ContingencyWitness> witness;
};

// Feature-level causal classification derived from resp_global.
CauseVerdict actual_cause(const Classifier& c, const EntityValues& e, int f_star, const Distribution& d,
                          const RespOptions& opt = {});

} // namespace xscore
