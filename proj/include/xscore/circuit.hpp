#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xscore/rational.hpp"

namespace xscore {

using FeatureId = int;
using GateId = int;

enum class GateKind { Var, Const, Not, And, Or };

struct Gate {
    GateKind kind;
    FeatureId feature = -1;      // Var only
    bool value = false;          // Const only
    std::vector<GateId> inputs;  // Not: 1, And/Or: >= 1
};

enum class TriState { Unchecked, VerifiedTrue, VerifiedFalse };
enum class Certification { None, ByCheck, ByConstruction };

// Total assignment of the circuit's features, indexed by FeatureId.
using BitEntity = std::vector<uint8_t>;

// Boolean circuit DAG over named binary features. Gates are stored in
// topological order: every input id refers to an earlier gate. Feature
// ids are dense, in first-appearance order.
class Circuit {
public:
    FeatureId intern_feature(const std::string& name);
    std::optional<FeatureId> find_feature(const std::string& name) const;

    GateId add_var(FeatureId f);
    GateId add_const(bool value);
    GateId add_not(GateId g);
    GateId add_and(std::vector<GateId> gs);
    GateId add_or(std::vector<GateId> gs);
    void set_output(GateId g);

    int num_gates() const { return static_cast<int>(gates_.size()); }
    int num_features() const { return static_cast<int>(feature_names_.size()); }
    const Gate& gate(GateId g) const { return gates_[static_cast<size_t>(g)]; }
    GateId output() const;
    bool has_output() const { return output_.has_value(); }
    const std::string& feature_name(FeatureId f) const { return feature_names_[static_cast<size_t>(f)]; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }

    // Sorted feature ids in the cone of gate g.
    const std::vector<FeatureId>& varset(GateId g) const { return varsets_[static_cast<size_t>(g)]; }
    const std::vector<FeatureId>& output_varset() const { return varset(output()); }

    TriState decomposable = TriState::Unchecked;
    TriState deterministic = TriState::Unchecked;
    Certification certification = Certification::None;

    bool certified_ddbc() const {
        return decomposable == TriState::VerifiedTrue && deterministic == TriState::VerifiedTrue &&
               certification != Certification::None;
    }
    void certify_by_construction() {
        decomposable = TriState::VerifiedTrue;
        deterministic = TriState::VerifiedTrue;
        certification = Certification::ByConstruction;
    }

private:
    GateId push(Gate g);

    std::vector<Gate> gates_;
    std::vector<std::vector<FeatureId>> varsets_;
    std::vector<std::string> feature_names_;
    std::map<std::string, FeatureId> feature_index_;
    std::optional<GateId> output_;
};

// Pure evaluation; memoized over gates per call.
bool eval(const Circuit& c, const BitEntity& e);

struct DecomposabilityVerdict {
    bool ok = false;
    GateId gate = -1;                    // offending And gate
    std::vector<FeatureId> overlap;      // shared features of two children
};

struct DeterminismVerdict {
    enum class Kind { Ok, Violation, BudgetExceeded } kind = Kind::Ok;
    GateId gate = -1;
    std::map<FeatureId, bool> witness;   // assignment over the gate's scope with >= 2 true children
};

// Structural check: every And gate's children have pairwise disjoint scopes.
// Updates c.decomposable (and certification when both flags become known).
DecomposabilityVerdict check_decomposable(Circuit& c);

// Semantic check: no Or gate has two children true under any assignment of
// its scope. Exhaustive; refuses gates whose scope exceeds `budget` vars.
DeterminismVerdict check_deterministic(Circuit& c, int budget = 20);

// Exact model count over Var(output). Pre: certified dDBC.
BigInt model_count(const Circuit& c);

// Enumeration count over Var(output); |Var(output)| <= cap.
BigInt brute_force_count(const Circuit& c, int cap = 20);

struct DistanceCounts {
    std::vector<BigInt> counts;      // counts[l] = models at Hamming distance l from e
    std::vector<FeatureId> scope;    // Var(output), sorted
};

// Model counts stratified by Hamming distance from e, over Var(output).
// Pre: certified dDBC, e total.
DistanceCounts count_by_distance(const Circuit& c, const BitEntity& e);

// Substitute the constant b for feature f. Preserves determinism and
// decomposability (a constant never adds scope overlap nor a second
// true child where there was none), so certification carries over.
Circuit restrict_feature(const Circuit& c, FeatureId f, bool b);

// Not(output); flags and certification carry over (no new And/Or gate).
Circuit complement(const Circuit& c);

} // namespace xscore
