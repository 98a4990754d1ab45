#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xscore/circuit.hpp"
#include "xscore/dtree.hpp"
#include "xscore/rational.hpp"

namespace xscore {

// An entity is a value index per schema feature.
using EntityValues = std::vector<int>;

struct Distribution {
    enum class Kind { Uniform, Product, Empirical };
    Kind kind = Kind::Uniform;

    // Product: marginals[f][v] = P(F = v); each row sums to 1.
    std::vector<std::vector<Rational>> marginals;

    // Empirical: weighted sample; weights positive, sum to 1 after load.
    std::vector<EntityValues> sample;
    std::vector<Rational> weights;

    static Distribution uniform() { return {}; }
    static Distribution product(std::vector<std::vector<Rational>> m);
    static Distribution empirical(std::vector<EntityValues> sample, std::vector<Rational> weights);

    // Uniform is materialized as even marginals when a product view helps.
    std::vector<std::vector<Rational>> marginals_for(const Schema& s) const;

    const char* kind_name() const;
};

// Binary classifier over a finite feature schema. One of three backends:
// a Boolean circuit (binary schemas only), a decision tree, or an explicit
// label table covering the whole population.
class Classifier {
public:
    static Classifier from_circuit(Circuit c);
    static Classifier from_tree(DecisionTree dt);
    static Classifier from_table(Schema s, std::vector<uint8_t> labels); // mixed-radix order, last feature fastest

    const Schema& schema() const { return schema_; }
    bool label(const EntityValues& e) const;

    // Label complement; used to explain label 0 via the label-of-interest knob.
    Classifier complemented() const;

    bool has_circuit() const { return circuit_ != nullptr; }
    const Circuit& circuit() const { return *circuit_; }

    // Mixed-radix index of an entity (row number in the population).
    size_t entity_index(const EntityValues& e) const;
    BigInt population_size() const;

private:
    Schema schema_;
    std::shared_ptr<const Circuit> circuit_;
    std::shared_ptr<const DecisionTree> tree_;
    std::shared_ptr<const std::vector<uint8_t>> table_;
    bool negate_ = false;
};

// Entity helpers.
BitEntity to_bits(const Schema& s, const EntityValues& e); // binary schemas
std::string render_entity(const Schema& s, const EntityValues& e);

} // namespace xscore
