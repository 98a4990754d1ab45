#pragma once

#include <vector>

#include "xscore/causality_db.hpp"
#include "xscore/circuit.hpp"
#include "xscore/classifier.hpp"
#include "xscore/game.hpp"
#include "xscore/resp.hpp"
#include "xscore/sat.hpp"

namespace xtest {

// Definitional Shapley value: average marginal contribution over all
// player orderings. Only for small player counts.
std::vector<xscore::Rational> shapley_by_permutations(const xscore::GameFunction& game);

// Distance-stratified model counts by plain enumeration over the output scope.
std::vector<xscore::BigInt> distance_counts_by_enumeration(const xscore::Circuit& c, const xscore::BitEntity& e);

// Truth-table satisfiability / entailment over the formulas' atoms.
bool satisfiable_by_truth_table(const std::vector<xscore::FormulaPtr>& theory);
bool entails_by_truth_table(const std::vector<xscore::FormulaPtr>& theory, const xscore::FormulaPtr& goal);

struct RespOracleResult {
    xscore::Rational score;  // 0 when no contingency works
    int min_gamma = -1;      // cardinality of the scoring contingency, -1 for none
};

// Exhaustive responsibility search straight from the definition; mirrors
// the default conventions (drop the original value, distribution marginal,
// strict-change contingency assignments).
RespOracleResult resp_by_enumeration(const xscore::Classifier& c, const xscore::EntityValues& e, int f_star,
                                     const xscore::Distribution& d);

// Exhaustive cause search over endogenous-tuple subsets, rebuilding a
// sub-instance per candidate rather than masking.
std::vector<xscore::TupleCauseReport> causes_by_enumeration(const xscore::Instance& db,
                                                            const xscore::ConjunctiveQuery& q);

} // namespace xtest
