#pragma once

#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "xscore/classifier.hpp"
#include "xscore/rational.hpp"

namespace xscore {

// Cooperative game on players 0..n-1; coalitions are bitmasks. Values are
// memoized so the underlying evaluator runs once per distinct coalition.
class GameFunction {
public:
    GameFunction(int players, std::function<Rational(uint64_t)> value);

    int players() const { return players_; }
    Rational operator()(uint64_t coalition) const;

private:
    int players_;
    std::function<Rational(uint64_t)> value_;
    mutable std::unordered_map<uint64_t, Rational> memo_;
};

// Shapley value of every player, by direct subset summation.
// Pre: players <= cap (default 20).
std::vector<Rational> shapley(const GameFunction& game, int cap = 20);

// The conditional-expectation game of a classifier at entity e:
//   G(S) = E[L(e') | e'_S = e_S] under d.
// Uniform/product: expectation over the whole population (population size
// bounded by pop_cap). Empirical: expectation over the matching sample;
// a coalition with zero sample support raises PreconditionError when the
// game is evaluated there.
GameFunction game_from_classifier(const Classifier& c, const EntityValues& e, const Distribution& d,
                                  uint64_t pop_cap = uint64_t{1} << 22);

} // namespace xscore
