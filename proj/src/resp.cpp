#include "xscore/resp.hpp"

#include <algorithm>

#include "xscore/errors.hpp"

namespace xscore {

namespace {

// Marginal weight of each value of feature f under d (unconditional).
std::vector<Rational> feature_marginal(const Distribution& d, const Schema& s, int f) {
    size_t dsz = s.domains[static_cast<size_t>(f)].size();
    switch (d.kind) {
    case Distribution::Kind::Uniform:
        return std::vector<Rational>(dsz, Rational(1, static_cast<long long>(dsz)));
    case Distribution::Kind::Product: {
        auto m = d.marginals_for(s);
        return m[static_cast<size_t>(f)];
    }
    case Distribution::Kind::Empirical: {
        std::vector<Rational> w(dsz, Rational(0));
        for (size_t i = 0; i < d.sample.size(); ++i) {
            int v = d.sample[i].at(static_cast<size_t>(f));
            if (v < 0 || static_cast<size_t>(v) >= dsz)
                throw PreconditionError("empirical sample value out of domain");
            w[static_cast<size_t>(v)] += d.weights[i];
        }
        return w;
    }
    }
    throw PreconditionError("unknown distribution kind");
}

struct Expectation {
    bool defined = false; // false: no admissible replacement value carries weight
    Rational value;
};

// E[label of e_mod with f_star replaced], over the kept replacement values.
Expectation replacement_expectation(const Classifier& cl, const EntityValues& e_mod, int f_star,
                                    int original_value, const Distribution& d, const RespOptions& opt) {
    const Schema& s = cl.schema();
    size_t dsz = s.domains[static_cast<size_t>(f_star)].size();
    std::vector<Rational> w;
    if (opt.uniform_expectation)
        w.assign(dsz, Rational(1, static_cast<long long>(dsz)));
    else
        w = feature_marginal(d, s, f_star);

    Rational total = 0, hit = 0;
    EntityValues probe = e_mod;
    for (size_t v = 0; v < dsz; ++v) {
        if (!opt.include_original_value && static_cast<int>(v) == original_value) continue;
        if (w[v] == 0) continue;
        probe[static_cast<size_t>(f_star)] = static_cast<int>(v);
        if (opt.admissible && !opt.admissible(probe)) continue;
        total += w[v];
        if (cl.label(probe)) hit += w[v];
    }
    if (total == 0) return {false, Rational(0)};
    return {true, hit / total};
}

Classifier oriented(const Classifier& c, const RespOptions& opt) {
    if (opt.label_of_interest == 1) return c;
    if (opt.label_of_interest == 0) return c.complemented();
    throw PreconditionError("label_of_interest must be 0 or 1");
}

void check_feature(const Schema& s, int f_star) {
    if (f_star < 0 || f_star >= s.size()) throw PreconditionError("unknown feature index");
    if (s.domains[static_cast<size_t>(f_star)].size() < 2)
        throw PreconditionError("feature '" + s.names[static_cast<size_t>(f_star)] +
                                "' has a singleton domain and cannot be intervened");
}

} // namespace

Rational resp_local(const Classifier& c, const EntityValues& e, int f_star,
                    const ContingencyWitness& contingency, const Distribution& d, const RespOptions& opt) {
    Classifier cl = oriented(c, opt);
    const Schema& s = cl.schema();
    check_feature(s, f_star);
    if (!cl.label(e))
        throw PreconditionError("entity does not carry the label of interest");
    if (contingency.features.size() != contingency.values.size())
        throw PreconditionError("contingency features/values length mismatch");

    EntityValues e_mod = e;
    for (size_t i = 0; i < contingency.features.size(); ++i) {
        int f = contingency.features[i];
        if (f == f_star) throw PreconditionError("contingency must not contain the scored feature");
        if (f < 0 || f >= s.size()) throw PreconditionError("contingency feature out of range");
        int v = contingency.values[i];
        if (v < 0 || static_cast<size_t>(v) >= s.domains[static_cast<size_t>(f)].size())
            throw PreconditionError("contingency value out of domain");
        e_mod[static_cast<size_t>(f)] = v;
    }
    if (!cl.label(e_mod))
        throw PreconditionError("contingency flips the label by itself; local score undefined");

    Expectation ex =
        replacement_expectation(cl, e_mod, f_star, e[static_cast<size_t>(f_star)], d, opt);
    if (!ex.defined)
        throw PreconditionError("no admissible replacement value carries probability mass");
    return (Rational(1) - ex.value) / Rational(1 + static_cast<long long>(contingency.features.size()));
}

RespResult resp_global(const Classifier& c, const EntityValues& e, int f_star, const Distribution& d,
                       const RespOptions& opt) {
    Classifier cl = oriented(c, opt);
    const Schema& s = cl.schema();
    check_feature(s, f_star);
    if (e.size() != static_cast<size_t>(s.size())) throw PreconditionError("entity arity does not match the schema");
    if (!cl.label(e))
        throw PreconditionError("entity does not carry the label of interest");

    int n = s.size();
    std::vector<int> others;
    for (int f = 0; f < n; ++f)
        if (f != f_star) others.push_back(f);

    int max_k = static_cast<int>(others.size());
    bool capped = opt.max_contingency >= 0 && opt.max_contingency < max_k;
    if (capped) max_k = opt.max_contingency;

    long long budget = opt.enumeration_budget;
    int original_value = e[static_cast<size_t>(f_star)];

    for (int k = 0; k <= max_k; ++k) {
        Rational best = 0;
        std::optional<ContingencyWitness> best_witness;

        // combinations of `others` of size k, lexicographic
        std::vector<int> idx(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
        bool more = true;
        while (more) {
            std::vector<int> gamma;
            for (int i : idx) gamma.push_back(others[static_cast<size_t>(i)]);

            // assignments that change every contingency feature, lexicographic
            // by (feature order, domain value index)
            std::vector<std::vector<int>> alternatives;
            bool feasible = true;
            for (int f : gamma) {
                std::vector<int> alts;
                for (size_t v = 0; v < s.domains[static_cast<size_t>(f)].size(); ++v)
                    if (static_cast<int>(v) != e[static_cast<size_t>(f)]) alts.push_back(static_cast<int>(v));
                if (alts.empty()) {
                    feasible = false;
                    break;
                }
                alternatives.push_back(std::move(alts));
            }

            if (feasible) {
                std::vector<size_t> pick(static_cast<size_t>(k), 0);
                bool assignments_left = true;
                while (assignments_left) {
                    if (--budget < 0)
                        throw CapExceededError("resp_global: enumeration budget exhausted at contingency cardinality " +
                                               std::to_string(k));
                    EntityValues e_mod = e;
                    ContingencyWitness w;
                    w.features = gamma;
                    for (int i = 0; i < k; ++i) {
                        int v = alternatives[static_cast<size_t>(i)][pick[static_cast<size_t>(i)]];
                        w.values.push_back(v);
                        e_mod[static_cast<size_t>(gamma[static_cast<size_t>(i)])] = v;
                    }
                    bool ok = (!opt.admissible || opt.admissible(e_mod)) && cl.label(e_mod);
                    if (ok) {
                        Expectation ex = replacement_expectation(cl, e_mod, f_star, original_value, d, opt);
                        if (ex.defined) {
                            Rational score = (Rational(1) - ex.value) / Rational(1 + k);
                            if (score > best) {
                                best = score;
                                best_witness = w;
                            }
                        }
                    }
                    // next assignment
                    int pos = k - 1;
                    while (pos >= 0) {
                        if (++pick[static_cast<size_t>(pos)] < alternatives[static_cast<size_t>(pos)].size()) break;
                        pick[static_cast<size_t>(pos)] = 0;
                        --pos;
                    }
                    if (pos < 0) assignments_left = false;
                }
            }

            // next combination
            int pos = k - 1;
            while (pos >= 0) {
                ++idx[static_cast<size_t>(pos)];
                if (idx[static_cast<size_t>(pos)] <= static_cast<int>(others.size()) - (k - pos)) {
                    for (int j = pos + 1; j < k; ++j)
                        idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
                    break;
                }
                --pos;
            }
            if (pos < 0) more = false;
            if (k == 0) more = false; // single empty combination
        }

        if (best > 0) return {best, best_witness};
    }

    if (capped)
        throw CapExceededError("resp_global: no positive score up to contingency cardinality " +
                               std::to_string(max_k) + "; search capped before exhaustion");
    return {Rational(0), std::nullopt};
}

CauseVerdict actual_cause(const Classifier& c, const EntityValues& e, int f_star, const Distribution& d,
                          const RespOptions& opt) {
    RespResult r = resp_global(c, e, f_star, d, opt);
    CauseVerdict v;
    v.responsibility = r.score;
    v.witness = r.witness;
    if (r.score == 0)
        v.kind = CauseVerdict::Kind::NotACause;
    else if (r.witness && r.witness->features.empty())
        v.kind = CauseVerdict::Kind::Counterfactual;
    else
        v.kind = CauseVerdict::Kind::Actual;
    return v;
}

} // namespace xscore
