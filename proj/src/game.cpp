#include "xscore/game.hpp"

#include "xscore/errors.hpp"

namespace xscore {

GameFunction::GameFunction(int players, std::function<Rational(uint64_t)> value)
    : players_(players), value_(std::move(value)) {
    if (players < 0 || players > 62) throw PreconditionError("game: player count out of range");
}

Rational GameFunction::operator()(uint64_t coalition) const {
    uint64_t full = (players_ >= 64) ? ~uint64_t{0} : ((uint64_t{1} << players_) - 1);
    coalition &= full;
    auto it = memo_.find(coalition);
    if (it != memo_.end()) return it->second;
    Rational v = value_(coalition);
    memo_.emplace(coalition, v);
    return v;
}

std::vector<Rational> shapley(const GameFunction& game, int cap) {
    int n = game.players();
    if (n > cap)
        throw CapExceededError("shapley: " + std::to_string(n) + " players exceed cap " + std::to_string(cap));
    std::vector<Rational> out(static_cast<size_t>(n), Rational(0));
    if (n == 0) return out;

    // coefficient |T|! (n-|T|-1)! / n!
    BigInt nfact = factorial(n);
    std::vector<Rational> coeff(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t)
        coeff[static_cast<size_t>(t)] = Rational(factorial(t) * factorial(n - 1 - t), nfact);

    uint64_t full = (uint64_t{1} << n) - 1;
    for (uint64_t mask = 0; mask <= full; ++mask) {
        Rational base = game(mask);
        int t = static_cast<int>(__builtin_popcountll(mask));
        for (int p = 0; p < n; ++p) {
            if (mask & (uint64_t{1} << p)) continue;
            out[static_cast<size_t>(p)] += coeff[static_cast<size_t>(t)] * (game(mask | (uint64_t{1} << p)) - base);
        }
    }
    return out;
}

namespace {

struct PopulationTables {
    // stage tables for the pin/sum fold; see game_from_classifier
    std::vector<Rational> acc;
    std::vector<size_t> radix;
};

} // namespace

GameFunction game_from_classifier(const Classifier& c, const EntityValues& e, const Distribution& d,
                                  uint64_t pop_cap) {
    const Schema& s = c.schema();
    int n = s.size();
    if (e.size() != static_cast<size_t>(n)) throw PreconditionError("entity arity does not match the schema");
    for (int f = 0; f < n; ++f)
        if (e[static_cast<size_t>(f)] < 0 ||
            static_cast<size_t>(e[static_cast<size_t>(f)]) >= s.domains[static_cast<size_t>(f)].size())
            throw PreconditionError("entity value out of domain for feature '" + s.names[static_cast<size_t>(f)] + "'");

    if (d.kind == Distribution::Kind::Empirical) {
        // G(S) = sum of weights of matching samples with label 1 / total matching weight
        auto sample = std::make_shared<std::vector<std::pair<EntityValues, Rational>>>();
        auto labels = std::make_shared<std::vector<uint8_t>>();
        for (size_t i = 0; i < d.sample.size(); ++i) {
            if (d.sample[i].size() != static_cast<size_t>(n))
                throw PreconditionError("empirical sample arity does not match the schema");
            sample->emplace_back(d.sample[i], d.weights[i]);
            labels->push_back(c.label(d.sample[i]) ? 1 : 0);
        }
        EntityValues ecopy = e;
        return GameFunction(n, [sample, labels, ecopy, n](uint64_t mask) -> Rational {
            Rational num = 0, den = 0;
            for (size_t i = 0; i < sample->size(); ++i) {
                const auto& [row, w] = (*sample)[i];
                bool match = true;
                for (int f = 0; f < n && match; ++f)
                    if (mask & (uint64_t{1} << f)) match = row[static_cast<size_t>(f)] == ecopy[static_cast<size_t>(f)];
                if (!match) continue;
                den += w;
                if ((*labels)[i]) num += w;
            }
            if (den == 0)
                throw PreconditionError("empirical distribution has zero support for the conditioning event");
            return num / den;
        });
    }

    // Uniform and product share one exact path over the full population.
    auto marg = d.marginals_for(s);

    // Fold check: domains of size 1 still occupy a 2-state slot afterwards.
    BigInt fold_size = 1;
    for (const auto& dom : s.domains) fold_size *= static_cast<long long>(std::max<size_t>(dom.size(), 2));
    if (fold_size > BigInt(pop_cap))
        throw CapExceededError("population too large for exact conditioning (cap " + std::to_string(pop_cap) + ")");

    // stage 0: full population table of w(z) * L(z), feature n-1 fastest
    size_t pop = 1;
    for (const auto& dom : s.domains) pop *= dom.size();
    std::vector<Rational> table(pop);
    {
        EntityValues z(static_cast<size_t>(n), 0);
        for (size_t idx = 0; idx < pop; ++idx) {
            size_t rest = idx;
            for (int f = n - 1; f >= 0; --f) {
                size_t dsz = s.domains[static_cast<size_t>(f)].size();
                z[static_cast<size_t>(f)] = static_cast<int>(rest % dsz);
                rest /= dsz;
            }
            if (!c.label(z)) continue;
            Rational w = 1;
            for (int f = 0; f < n; ++f)
                w *= marg[static_cast<size_t>(f)][static_cast<size_t>(z[static_cast<size_t>(f)])];
            table[idx] = std::move(w);
        }
    }

    // Fold each feature axis down to two states: pinned-to-e vs summed-out.
    // After all folds, entry at mask S holds A(S) = sum over z with z_S = e_S
    // of w(z) L(z); the conditional is A(S) / prod_{f in S} P_f(e_f).
    std::vector<size_t> dsz(static_cast<size_t>(n));
    for (int f = 0; f < n; ++f) dsz[static_cast<size_t>(f)] = s.domains[static_cast<size_t>(f)].size();

    std::vector<Rational> cur = std::move(table);
    // sizes: features < k folded (2 states), >= k original
    for (int k = n - 1; k >= 0; --k) {
        // current layout: [folded dims for f<k... none yet processed below k]
        // we fold axes from the last feature to the first so strides stay simple
        size_t inner = 1; // product over already-folded axes after k (2 states each)
        for (int f = k + 1; f < n; ++f) inner *= 2;
        size_t outer = 1; // product over not-yet-folded axes before k
        for (int f = 0; f < k; ++f) outer *= dsz[static_cast<size_t>(f)];
        size_t dk = dsz[static_cast<size_t>(k)];
        std::vector<Rational> next(outer * 2 * inner);
        size_t ek = static_cast<size_t>(e[static_cast<size_t>(k)]);
        for (size_t o = 0; o < outer; ++o) {
            for (size_t i = 0; i < inner; ++i) {
                Rational sum = 0;
                for (size_t v = 0; v < dk; ++v) sum += cur[(o * dk + v) * inner + i];
                next[(o * 2 + 1) * inner + i] = cur[(o * dk + ek) * inner + i]; // pinned
                next[(o * 2 + 0) * inner + i] = std::move(sum);                // summed out
            }
        }
        cur = std::move(next);
    }
    // cur has 2^n entries; bit f of the index (counting from the most
    // significant axis) says whether feature f is pinned. Re-key to masks
    // with bit f = (1 << f).
    auto A = std::make_shared<std::vector<Rational>>(size_t{1} << n);
    for (size_t idx = 0; idx < cur.size(); ++idx) {
        uint64_t mask = 0;
        for (int f = 0; f < n; ++f) {
            size_t axis_bit = (idx >> (n - 1 - f)) & 1;
            if (axis_bit) mask |= uint64_t{1} << f;
        }
        (*A)[mask] = std::move(cur[idx]);
    }

    // P_f(e_f) per feature, for the normalizing factor
    auto pin_p = std::make_shared<std::vector<Rational>>();
    for (int f = 0; f < n; ++f)
        pin_p->push_back(marg[static_cast<size_t>(f)][static_cast<size_t>(e[static_cast<size_t>(f)])]);

    return GameFunction(n, [A, pin_p, n](uint64_t mask) -> Rational {
        Rational den = 1;
        for (int f = 0; f < n; ++f)
            if (mask & (uint64_t{1} << f)) den *= (*pin_p)[static_cast<size_t>(f)];
        if (den == 0)
            throw PreconditionError("conditioning event has probability zero under the product distribution");
        return (*A)[mask] / den;
    });
}

} // namespace xscore
