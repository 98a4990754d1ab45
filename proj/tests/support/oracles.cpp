#include "support/oracles.hpp"

#include <algorithm>
#include <numeric>

namespace xtest {

using namespace xscore;

std::vector<Rational> shapley_by_permutations(const GameFunction& game) {
    int n = game.players();
    std::vector<Rational> acc(static_cast<size_t>(n), Rational(0));
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    BigInt count = 0;
    do {
        uint64_t mask = 0;
        for (int p : perm) {
            Rational before = game(mask);
            mask |= uint64_t{1} << p;
            acc[static_cast<size_t>(p)] += game(mask) - before;
        }
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (auto& a : acc) a /= Rational(count);
    return acc;
}

std::vector<BigInt> distance_counts_by_enumeration(const Circuit& c, const BitEntity& e) {
    const auto& vs = c.output_varset();
    std::vector<BigInt> counts(vs.size() + 1, BigInt(0));
    BitEntity probe = e;
    uint64_t total = uint64_t{1} << vs.size();
    for (uint64_t m = 0; m < total; ++m) {
        int dist = 0;
        for (size_t k = 0; k < vs.size(); ++k) {
            uint8_t bit = (m >> k) & 1u;
            probe[static_cast<size_t>(vs[k])] = bit;
            if (bit != e[static_cast<size_t>(vs[k])]) ++dist;
        }
        if (eval(c, probe)) ++counts[static_cast<size_t>(dist)];
    }
    return counts;
}

namespace {

bool eval_all_formulas(const std::vector<FormulaPtr>& theory,
                       const std::vector<std::pair<std::string, bool>>& assignment) {
    for (const auto& f : theory)
        if (!eval_formula(f, assignment)) return false;
    return true;
}

std::vector<std::string> theory_atoms(const std::vector<FormulaPtr>& theory) {
    std::vector<std::string> atoms;
    for (const auto& f : theory) collect_atoms(f, atoms);
    return atoms;
}

} // namespace

bool satisfiable_by_truth_table(const std::vector<FormulaPtr>& theory) {
    std::vector<std::string> atoms = theory_atoms(theory);
    uint64_t total = uint64_t{1} << atoms.size();
    std::vector<std::pair<std::string, bool>> assignment;
    for (const auto& a : atoms) assignment.emplace_back(a, false);
    for (uint64_t m = 0; m < total; ++m) {
        for (size_t k = 0; k < atoms.size(); ++k) assignment[k].second = (m >> k) & 1u;
        if (eval_all_formulas(theory, assignment)) return true;
    }
    return false;
}

bool entails_by_truth_table(const std::vector<FormulaPtr>& theory, const FormulaPtr& goal) {
    std::vector<FormulaPtr> all = theory;
    all.push_back(goal);
    std::vector<std::string> atoms = theory_atoms(all);
    uint64_t total = uint64_t{1} << atoms.size();
    std::vector<std::pair<std::string, bool>> assignment;
    for (const auto& a : atoms) assignment.emplace_back(a, false);
    for (uint64_t m = 0; m < total; ++m) {
        for (size_t k = 0; k < atoms.size(); ++k) assignment[k].second = (m >> k) & 1u;
        if (eval_all_formulas(theory, assignment) && !eval_formula(goal, assignment)) return false;
    }
    return true;
}

RespOracleResult resp_by_enumeration(const Classifier& c, const EntityValues& e, int f_star,
                                     const Distribution& d) {
    const Schema& s = c.schema();
    int n = s.size();

    // marginal weights for f_star straight from the distribution
    std::vector<Rational> weight(s.domains[static_cast<size_t>(f_star)].size(), Rational(0));
    switch (d.kind) {
    case Distribution::Kind::Uniform:
        for (auto& w : weight) w = Rational(1, static_cast<long long>(weight.size()));
        break;
    case Distribution::Kind::Product:
        weight = d.marginals[static_cast<size_t>(f_star)];
        break;
    case Distribution::Kind::Empirical:
        for (size_t i = 0; i < d.sample.size(); ++i)
            weight[static_cast<size_t>(d.sample[i][static_cast<size_t>(f_star)])] += d.weights[i];
        break;
    }

    auto expectation = [&](const EntityValues& base) -> std::pair<bool, Rational> {
        Rational total = 0, hit = 0;
        EntityValues probe = base;
        for (size_t v = 0; v < weight.size(); ++v) {
            if (static_cast<int>(v) == e[static_cast<size_t>(f_star)]) continue; // drop original value
            if (weight[v] == 0) continue;
            probe[static_cast<size_t>(f_star)] = static_cast<int>(v);
            total += weight[v];
            if (c.label(probe)) hit += weight[v];
        }
        if (total == 0) return {false, Rational(0)};
        return {true, hit / total};
    };

    std::vector<int> others;
    for (int f = 0; f < n; ++f)
        if (f != f_star) others.push_back(f);

    for (size_t k = 0; k <= others.size(); ++k) {
        Rational best = 0;
        // subsets via bitmask filtered by popcount (small n only)
        for (uint64_t mask = 0; mask < (uint64_t{1} << others.size()); ++mask) {
            if (static_cast<size_t>(__builtin_popcountll(mask)) != k) continue;
            std::vector<int> gamma;
            for (size_t i = 0; i < others.size(); ++i)
                if (mask & (uint64_t{1} << i)) gamma.push_back(others[i]);
            // odometer over changed values
            std::vector<int> pick(gamma.size(), 0);
            bool carry_done = false;
            while (!carry_done) {
                EntityValues mod = e;
                bool valid = true;
                for (size_t i = 0; i < gamma.size() && valid; ++i) {
                    int f = gamma[i];
                    int dsz = static_cast<int>(s.domains[static_cast<size_t>(f)].size());
                    int v = pick[i] >= e[static_cast<size_t>(f)] ? pick[i] + 1 : pick[i]; // skip the original
                    if (v >= dsz)
                        valid = false;
                    else
                        mod[static_cast<size_t>(f)] = v;
                }
                if (valid && c.label(mod)) {
                    auto [defined, ex] = expectation(mod);
                    if (defined) {
                        Rational score = (Rational(1) - ex) / Rational(1 + static_cast<long long>(k));
                        if (score > best) best = score;
                    }
                }
                // advance odometer
                size_t pos = 0;
                for (;;) {
                    if (pos == pick.size()) {
                        carry_done = true;
                        break;
                    }
                    int dsz = static_cast<int>(s.domains[static_cast<size_t>(gamma[pos])].size());
                    if (++pick[pos] < dsz - 1) break;
                    pick[pos] = 0;
                    ++pos;
                }
                if (gamma.empty()) carry_done = true;
            }
        }
        if (best > 0) return {best, static_cast<int>(k)};
    }
    return {Rational(0), -1};
}

std::vector<TupleCauseReport> causes_by_enumeration(const Instance& db, const ConjunctiveQuery& q) {
    std::vector<int> endo = db.endogenous_indices();
    size_t m = endo.size();

    auto sub_instance_holds = [&](uint64_t keep_out) {
        std::vector<DbTuple> rest;
        std::vector<DbTuple> exo;
        for (size_t i = 0; i < db.tuples.size(); ++i) {
            bool removed = false;
            for (size_t j = 0; j < m; ++j)
                if ((keep_out & (uint64_t{1} << j)) && endo[j] == static_cast<int>(i)) removed = true;
            if (removed) continue;
            rest.push_back(db.tuples[i]);
            if (db.exogenous[i]) exo.push_back(db.tuples[i]);
        }
        return eval_cq(Instance::make(rest, exo), q).holds;
    };

    std::vector<TupleCauseReport> out;
    for (size_t ti = 0; ti < m; ++ti) {
        TupleCauseReport rep;
        rep.tuple = db.tuples[static_cast<size_t>(endo[ti])];
        rep.responsibility = 0;

        size_t best = SIZE_MAX;
        std::vector<uint64_t> winners;
        for (uint64_t gamma = 0; gamma < (uint64_t{1} << m); ++gamma) {
            if (gamma & (uint64_t{1} << ti)) continue;
            size_t k = static_cast<size_t>(__builtin_popcountll(gamma));
            if (k > best) continue;
            if (!sub_instance_holds(gamma)) continue;
            if (sub_instance_holds(gamma | (uint64_t{1} << ti))) continue;
            if (k < best) {
                best = k;
                winners.clear();
            }
            winners.push_back(gamma);
        }
        if (best != SIZE_MAX) {
            rep.kind = best == 0 ? TupleCauseReport::Kind::Counterfactual : TupleCauseReport::Kind::Actual;
            rep.responsibility = Rational(1, 1 + static_cast<long long>(best));
            for (uint64_t gamma : winners) {
                std::vector<DbTuple> set;
                for (size_t j = 0; j < m; ++j)
                    if (gamma & (uint64_t{1} << j)) set.push_back(db.tuples[static_cast<size_t>(endo[j])]);
                rep.min_contingencies.push_back(std::move(set));
            }
        }
        out.push_back(std::move(rep));
    }
    return out;
}

} // namespace xtest
