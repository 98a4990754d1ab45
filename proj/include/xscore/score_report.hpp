#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xscore/rational.hpp"

namespace xscore {

// Contingency witness for responsibility-style scores: features moved away
// from the entity's values, with the replacement value index per feature.
struct ContingencyWitness {
    std::vector<int> features;  // sorted schema indices
    std::vector<int> values;    // replacement value index, aligned with features
};

struct ScoreEntry {
    std::string feature;
    Rational score;
    std::optional<ContingencyWitness> witness;
};

struct ScoreReport {
    std::string method;        // "shap-exact" | "shap-brute" | "shapley" | "resp"
    std::string distribution;  // "uniform" | "product" | "empirical" | "-"
    std::vector<ScoreEntry> entries;

    Rational total() const {
        Rational t = 0;
        for (const auto& e : entries) t += e.score;
        return t;
    }
};

} // namespace xscore
