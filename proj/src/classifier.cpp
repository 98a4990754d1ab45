#include "xscore/classifier.hpp"

#include "xscore/errors.hpp"

namespace xscore {

Distribution Distribution::product(std::vector<std::vector<Rational>> m) {
    Distribution d;
    d.kind = Kind::Product;
    d.marginals = std::move(m);
    for (const auto& row : d.marginals) {
        Rational sum = 0;
        for (const auto& p : row) {
            if (p < 0) throw PreconditionError("product distribution: negative marginal probability");
            sum += p;
        }
        if (sum != 1) throw PreconditionError("product distribution: marginals must sum to 1, got " +
                                              to_fraction_string(sum));
    }
    return d;
}

Distribution Distribution::empirical(std::vector<EntityValues> sample, std::vector<Rational> weights) {
    Distribution d;
    d.kind = Kind::Empirical;
    if (sample.size() != weights.size())
        throw PreconditionError("empirical distribution: sample/weight length mismatch");
    if (sample.empty()) throw PreconditionError("empirical distribution: empty sample");
    Rational sum = 0;
    for (const auto& w : weights) {
        if (w <= 0) throw PreconditionError("empirical distribution: weights must be positive");
        sum += w;
    }
    // normalize so callers may pass raw counts
    for (auto& w : weights) w /= sum;
    d.sample = std::move(sample);
    d.weights = std::move(weights);
    return d;
}

std::vector<std::vector<Rational>> Distribution::marginals_for(const Schema& s) const {
    if (kind == Kind::Product) {
        if (marginals.size() != s.domains.size())
            throw PreconditionError("product distribution: wrong number of marginal rows for the schema");
        for (size_t f = 0; f < marginals.size(); ++f)
            if (marginals[f].size() != s.domains[f].size())
                throw PreconditionError("product distribution: marginal row for '" + s.names[f] +
                                        "' does not match the domain size");
        return marginals;
    }
    if (kind == Kind::Uniform) {
        std::vector<std::vector<Rational>> m;
        for (const auto& dom : s.domains) {
            if (dom.empty()) throw PreconditionError("uniform distribution over an empty domain");
            m.emplace_back(dom.size(), Rational(1, static_cast<long long>(dom.size())));
        }
        return m;
    }
    throw PreconditionError("empirical distribution has no product marginals");
}

const char* Distribution::kind_name() const {
    switch (kind) {
    case Kind::Uniform: return "uniform";
    case Kind::Product: return "product";
    case Kind::Empirical: return "empirical";
    }
    return "?";
}

Classifier Classifier::from_circuit(Circuit c) {
    Classifier cl;
    for (const auto& name : c.feature_names()) {
        cl.schema_.names.push_back(name);
        cl.schema_.domains.push_back({"0", "1"});
    }
    cl.circuit_ = std::make_shared<Circuit>(std::move(c));
    return cl;
}

Classifier Classifier::from_tree(DecisionTree dt) {
    Classifier cl;
    cl.schema_ = dt.schema;
    cl.tree_ = std::make_shared<DecisionTree>(std::move(dt));
    return cl;
}

Classifier Classifier::from_table(Schema s, std::vector<uint8_t> labels) {
    BigInt pop = 1;
    for (const auto& dom : s.domains) {
        if (dom.empty()) throw PreconditionError("table classifier: empty feature domain");
        pop *= static_cast<long long>(dom.size());
    }
    if (pop != static_cast<long long>(labels.size()))
        throw PreconditionError("table classifier: label table must cover the whole population");
    Classifier cl;
    cl.schema_ = std::move(s);
    cl.table_ = std::make_shared<std::vector<uint8_t>>(std::move(labels));
    return cl;
}

size_t Classifier::entity_index(const EntityValues& e) const {
    if (e.size() != schema_.domains.size())
        throw PreconditionError("entity arity does not match the schema");
    size_t idx = 0;
    for (size_t f = 0; f < e.size(); ++f) {
        int v = e[f];
        if (v < 0 || static_cast<size_t>(v) >= schema_.domains[f].size())
            throw PreconditionError("entity value out of domain for feature '" + schema_.names[f] + "'");
        idx = idx * schema_.domains[f].size() + static_cast<size_t>(v);
    }
    return idx;
}

BigInt Classifier::population_size() const {
    BigInt pop = 1;
    for (const auto& dom : schema_.domains) pop *= static_cast<long long>(dom.size());
    return pop;
}

bool Classifier::label(const EntityValues& e) const {
    bool v;
    if (circuit_) {
        v = eval(*circuit_, to_bits(schema_, e));
    } else if (tree_) {
        if (e.size() != schema_.domains.size())
            throw PreconditionError("entity arity does not match the schema");
        v = tree_->evaluate(e);
    } else if (table_) {
        v = (*table_)[entity_index(e)] != 0;
    } else {
        throw PreconditionError("empty classifier");
    }
    return negate_ ? !v : v;
}

Classifier Classifier::complemented() const {
    Classifier cl = *this;
    cl.negate_ = !negate_;
    return cl;
}

BitEntity to_bits(const Schema& s, const EntityValues& e) {
    if (e.size() != s.domains.size()) throw PreconditionError("entity arity does not match the schema");
    BitEntity bits(e.size(), 0);
    for (size_t f = 0; f < e.size(); ++f) {
        const auto& dom = s.domains[f];
        if (dom.size() != 2 || dom[0] != "0" || dom[1] != "1")
            throw PreconditionError("feature '" + s.names[f] + "' is not binary");
        if (e[f] != 0 && e[f] != 1)
            throw PreconditionError("entity value out of domain for feature '" + s.names[f] + "'");
        bits[f] = static_cast<uint8_t>(e[f]);
    }
    return bits;
}

std::string render_entity(const Schema& s, const EntityValues& e) {
    std::string out = "<";
    for (size_t f = 0; f < e.size(); ++f) {
        if (f) out += ",";
        out += s.domains[f][static_cast<size_t>(e[f])];
    }
    return out + ">";
}

} // namespace xscore
