#pragma once

#include "xscore/classifier.hpp"
#include "xscore/game.hpp"
#include "xscore/score_report.hpp"

namespace xscore {

// Shap score of every feature: the Shapley value of the conditional-
// expectation game. Works for any classifier backend and distribution;
// cost is exponential in the feature count (cap default 14).
ScoreReport shap_brute(const Classifier& c, const EntityValues& e, const Distribution& d, int cap = 14);

// Exact Shap for circuit classifiers whose circuit is a certified dDBC,
// under uniform or product distributions. Polynomial in the circuit size.
ScoreReport shap_exact(const Classifier& c, const EntityValues& e, const Distribution& d);

struct RedIdentityReport {
    bool holds = false;
    BigInt model_count_full;   // models of the classifier over the full feature space
    Rational rhs;              // 2^n * (L(e) - sum of Shap scores)
    Rational discrepancy;      // model_count_full - rhs
};

// Checks the counting identity that ties Shap scores under the uniform
// distribution to the classifier's model count:
//   #SAT = 2^n * (L(e) - sum_F Shap(F)).
// Pre: certified dDBC circuit classifier.
RedIdentityReport verify_red_identity(const Classifier& c, const EntityValues& e);

} // namespace xscore
