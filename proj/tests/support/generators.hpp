#pragma once

#include <random>
#include <vector>

#include "xscore/causality_db.hpp"
#include "xscore/classifier.hpp"
#include "xscore/dtree.hpp"
#include "xscore/formula.hpp"
#include "xscore/game.hpp"

namespace xtest {

using Rng = std::mt19937_64;

// Binary decision tree with no retests along a path; the node budget keeps
// exhaustive checks affordable.
xscore::DecisionTree random_binary_tree(Rng& rng, int features, int max_depth);

// Schema with 1..max_features features, domain sizes 2..max_domain.
xscore::Schema random_schema(Rng& rng, int max_features, int max_domain);

xscore::Classifier random_table_classifier(Rng& rng, const xscore::Schema& s);

xscore::Distribution random_product(Rng& rng, const xscore::Schema& s);

xscore::EntityValues random_entity(Rng& rng, const xscore::Schema& s);

// Rational-valued game from a dense random table.
xscore::GameFunction random_game(Rng& rng, int players);

// Instance over relations R/2, S/1, T/2 with constants a..f; some tuples
// may be marked exogenous.
xscore::Instance random_instance(Rng& rng, int max_tuples, bool with_exogenous);

// One of a fixed pool of small conjunctive queries over R, S, T.
xscore::ConjunctiveQuery random_query(Rng& rng);

// Random propositional formula over the given atoms.
xscore::FormulaPtr random_formula(Rng& rng, const std::vector<std::string>& atoms, int depth);

} // namespace xtest
