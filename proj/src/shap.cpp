#include "xscore/shap.hpp"

#include <algorithm>

#include "xscore/errors.hpp"

namespace xscore {

ScoreReport shap_brute(const Classifier& c, const EntityValues& e, const Distribution& d, int cap) {
    int n = c.schema().size();
    if (n > cap)
        throw CapExceededError("shap_brute: " + std::to_string(n) + " features exceed cap " + std::to_string(cap));
    GameFunction game = game_from_classifier(c, e, d);
    std::vector<Rational> phi = shapley(game, std::max(cap, n));
    ScoreReport r;
    r.method = "shap-brute";
    r.distribution = d.kind_name();
    for (int f = 0; f < n; ++f)
        r.entries.push_back({c.schema().names[static_cast<size_t>(f)], phi[static_cast<size_t>(f)], std::nullopt});
    return r;
}

namespace {

// Pinned-aggregate vector of a gate g with scope V, relative to entity e and
// per-feature probabilities P:
//   alpha_g(t) = sum over S subset of V with |S| = t, and z over V with
//                z_S = e_S, of [g satisfied by z] * prod_{i in V \ S} P_i(z_i).
// Computed bottom-up. Needs determinism for Or (disjoint child events) and
// decomposability for And (independent scopes).
struct AlphaVec {
    std::vector<Rational> a; // index t = 0..|scope|
};

// smooth a child vector from scope size v1 to scope size v (v >= v1):
// each extra feature is either pinned (no factor) or summed out (factor 1)
std::vector<Rational> smooth_alpha(const std::vector<Rational>& child, long long v1, long long v) {
    std::vector<Rational> out(static_cast<size_t>(v) + 1, Rational(0));
    long long extra = v - v1;
    for (long long j = 0; j <= v1; ++j) {
        if (child[static_cast<size_t>(j)] == 0) continue;
        for (long long t = j; t <= j + extra; ++t)
            out[static_cast<size_t>(t)] += child[static_cast<size_t>(j)] * Rational(binomial(extra, t - j));
    }
    return out;
}

std::vector<Rational> alpha_of_circuit(const Circuit& c, const BitEntity& e,
                                       const std::vector<Rational>& p_true) {
    // p_true[f] = P(feature f = 1); e gives the pinned values
    std::vector<std::vector<Rational>> alpha(static_cast<size_t>(c.num_gates()));
    for (GateId id = 0; id < c.num_gates(); ++id) {
        const Gate& g = c.gate(id);
        std::vector<Rational> v;
        switch (g.kind) {
        case GateKind::Var: {
            size_t f = static_cast<size_t>(g.feature);
            v = {p_true[f], Rational(e[f] ? 1 : 0)};
            break;
        }
        case GateKind::Const:
            v = {Rational(g.value ? 1 : 0)};
            break;
        case GateKind::Not: {
            const auto& child = alpha[static_cast<size_t>(g.inputs[0])];
            long long nv = static_cast<long long>(c.varset(id).size());
            v.resize(static_cast<size_t>(nv) + 1);
            // complement within the same scope: alpha of the constant-true
            // gate on scope V is C(|V|, t) (all weights sum to 1)
            for (long long t = 0; t <= nv; ++t)
                v[static_cast<size_t>(t)] = Rational(binomial(nv, t)) - child[static_cast<size_t>(t)];
            break;
        }
        case GateKind::And: {
            v = {Rational(1)};
            for (GateId in : g.inputs) {
                const auto& child = alpha[static_cast<size_t>(in)];
                std::vector<Rational> next(v.size() + child.size() - 1);
                for (size_t a = 0; a < v.size(); ++a) {
                    if (v[a] == 0) continue;
                    for (size_t b = 0; b < child.size(); ++b)
                        if (child[b] != 0) next[a + b] += v[a] * child[b];
                }
                v = std::move(next);
            }
            break;
        }
        case GateKind::Or: {
            long long nv = static_cast<long long>(c.varset(id).size());
            v.assign(static_cast<size_t>(nv) + 1, Rational(0));
            for (GateId in : g.inputs) {
                auto sm = smooth_alpha(alpha[static_cast<size_t>(in)],
                                       static_cast<long long>(c.varset(in).size()), nv);
                for (size_t t = 0; t < v.size(); ++t) v[t] += sm[t];
            }
            break;
        }
        }
        alpha[static_cast<size_t>(id)] = std::move(v);
    }
    return alpha[static_cast<size_t>(c.output())];
}

} // namespace

ScoreReport shap_exact(const Classifier& c, const EntityValues& e, const Distribution& d) {
    if (!c.has_circuit())
        throw PreconditionError("shap_exact needs a circuit classifier; compile the model first");
    const Circuit& circ = c.circuit();
    if (!circ.certified_ddbc())
        throw PreconditionError("shap_exact requires a certified dDBC (run the checks or compile a tree)");
    if (d.kind == Distribution::Kind::Empirical)
        throw PreconditionError("shap_exact supports uniform and product distributions only");

    const Schema& s = c.schema();
    int n = s.size();
    BitEntity bits = to_bits(s, e);

    // P(feature = 1) per feature; uniform becomes 1/2 everywhere
    auto marg = d.marginals_for(s);
    std::vector<Rational> p_true(static_cast<size_t>(n));
    for (int f = 0; f < n; ++f) p_true[static_cast<size_t>(f)] = marg[static_cast<size_t>(f)][1];

    // Shapley position weights: c(t) = t! (n-1-t)! / n!
    BigInt nfact = factorial(n);
    std::vector<Rational> coeff(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t)
        coeff[static_cast<size_t>(t)] = Rational(factorial(t) * factorial(n - 1 - t), nfact);

    ScoreReport r;
    r.method = "shap-exact";
    r.distribution = d.kind_name();

    long long m = n - 1; // scope size of the per-feature aggregate
    for (int f = 0; f < n; ++f) {
        // probability that a resample of F lands on the other value
        Rational p1 = p_true[static_cast<size_t>(f)];
        Rational q = bits[static_cast<size_t>(f)] ? Rational(1) - p1 : p1;

        Rational score = 0;
        if (q != 0) {
            bool ef = bits[static_cast<size_t>(f)] != 0;
            Circuit same = restrict_feature(circ, f, ef);
            Circuit other = restrict_feature(circ, f, !ef);

            auto a_same = alpha_of_circuit(same, bits, p_true);
            auto a_other = alpha_of_circuit(other, bits, p_true);
            long long v_same = static_cast<long long>(same.output_varset().size());
            long long v_other = static_cast<long long>(other.output_varset().size());
            auto s_same = smooth_alpha(a_same, v_same, m);
            auto s_other = smooth_alpha(a_other, v_other, m);

            for (long long t = 0; t <= m && t < n; ++t)
                score += coeff[static_cast<size_t>(t)] *
                         (s_same[static_cast<size_t>(t)] - s_other[static_cast<size_t>(t)]);
            score *= q;
        }
        r.entries.push_back({s.names[static_cast<size_t>(f)], score, std::nullopt});
    }
    return r;
}

RedIdentityReport verify_red_identity(const Classifier& c, const EntityValues& e) {
    if (!c.has_circuit() || !c.circuit().certified_ddbc())
        throw PreconditionError("verify_red_identity requires a certified dDBC circuit classifier");
    int n = c.schema().size();
    long long circuit_vars = static_cast<long long>(c.circuit().output_varset().size());

    RedIdentityReport rep;
    rep.model_count_full = model_count(c.circuit()) * pow2(n - circuit_vars);

    ScoreReport shap = shap_exact(c, e, Distribution::uniform());
    Rational label = c.label(e) ? 1 : 0;
    rep.rhs = (label - shap.total()) * Rational(pow2(n));
    rep.discrepancy = Rational(rep.model_count_full) - rep.rhs;
    rep.holds = rep.discrepancy == 0;
    return rep;
}

} // namespace xscore
