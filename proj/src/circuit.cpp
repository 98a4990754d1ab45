#include "xscore/circuit.hpp"

#include <algorithm>

#include "xscore/errors.hpp"

namespace xscore {

namespace {

std::vector<FeatureId> merge_sorted(const std::vector<FeatureId>& a, const std::vector<FeatureId>& b) {
    std::vector<FeatureId> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace

FeatureId Circuit::intern_feature(const std::string& name) {
    auto it = feature_index_.find(name);
    if (it != feature_index_.end()) return it->second;
    FeatureId f = static_cast<FeatureId>(feature_names_.size());
    feature_names_.push_back(name);
    feature_index_.emplace(name, f);
    return f;
}

std::optional<FeatureId> Circuit::find_feature(const std::string& name) const {
    auto it = feature_index_.find(name);
    if (it == feature_index_.end()) return std::nullopt;
    return it->second;
}

GateId Circuit::push(Gate g) {
    GateId id = static_cast<GateId>(gates_.size());
    for (GateId in : g.inputs)
        if (in < 0 || in >= id)
            throw ParseError("gate " + std::to_string(id) + ": input " + std::to_string(in) +
                             " does not refer to an earlier gate");
    std::vector<FeatureId> vs;
    switch (g.kind) {
    case GateKind::Var:
        vs = {g.feature};
        break;
    case GateKind::Const:
        break;
    case GateKind::Not:
        if (g.inputs.size() != 1) throw ParseError("not gate needs exactly one input");
        vs = varsets_[static_cast<size_t>(g.inputs[0])];
        break;
    case GateKind::And:
    case GateKind::Or:
        if (g.inputs.empty()) throw ParseError("and/or gate needs at least one input");
        for (GateId in : g.inputs) vs = merge_sorted(vs, varsets_[static_cast<size_t>(in)]);
        break;
    }
    gates_.push_back(std::move(g));
    varsets_.push_back(std::move(vs));
    // any structural edit invalidates previous semantic verdicts
    decomposable = TriState::Unchecked;
    deterministic = TriState::Unchecked;
    certification = Certification::None;
    return id;
}

GateId Circuit::add_var(FeatureId f) {
    if (f < 0 || f >= num_features()) throw ParseError("var gate: unknown feature id");
    Gate g;
    g.kind = GateKind::Var;
    g.feature = f;
    return push(std::move(g));
}

GateId Circuit::add_const(bool value) {
    Gate g;
    g.kind = GateKind::Const;
    g.value = value;
    return push(std::move(g));
}

GateId Circuit::add_not(GateId in) {
    Gate g;
    g.kind = GateKind::Not;
    g.inputs = {in};
    return push(std::move(g));
}

GateId Circuit::add_and(std::vector<GateId> gs) {
    Gate g;
    g.kind = GateKind::And;
    g.inputs = std::move(gs);
    return push(std::move(g));
}

GateId Circuit::add_or(std::vector<GateId> gs) {
    Gate g;
    g.kind = GateKind::Or;
    g.inputs = std::move(gs);
    return push(std::move(g));
}

void Circuit::set_output(GateId g) {
    if (g < 0 || g >= num_gates()) throw ParseError("output refers to a gate that does not exist");
    output_ = g;
}

GateId Circuit::output() const {
    if (!output_) throw ParseError("circuit has no output gate");
    return *output_;
}

namespace {

// One bottom-up pass; vals[g] is g's value under e.
void eval_all(const Circuit& c, const BitEntity& e, std::vector<uint8_t>& vals) {
    vals.resize(static_cast<size_t>(c.num_gates()));
    for (GateId id = 0; id < c.num_gates(); ++id) {
        const Gate& g = c.gate(id);
        uint8_t v = 0;
        switch (g.kind) {
        case GateKind::Var:
            if (g.feature < 0 || static_cast<size_t>(g.feature) >= e.size())
                throw PreconditionError("entity does not assign feature '" + c.feature_name(g.feature) + "'");
            v = e[static_cast<size_t>(g.feature)] ? 1 : 0;
            break;
        case GateKind::Const:
            v = g.value ? 1 : 0;
            break;
        case GateKind::Not:
            v = vals[static_cast<size_t>(g.inputs[0])] ? 0 : 1;
            break;
        case GateKind::And:
            v = 1;
            for (GateId in : g.inputs) v &= vals[static_cast<size_t>(in)];
            break;
        case GateKind::Or:
            v = 0;
            for (GateId in : g.inputs) v |= vals[static_cast<size_t>(in)];
            break;
        }
        vals[static_cast<size_t>(id)] = v;
    }
}

} // namespace

bool eval(const Circuit& c, const BitEntity& e) {
    std::vector<uint8_t> vals;
    eval_all(c, e, vals);
    return vals[static_cast<size_t>(c.output())] != 0;
}

DecomposabilityVerdict check_decomposable(Circuit& c) {
    DecomposabilityVerdict v;
    for (GateId id = 0; id < c.num_gates(); ++id) {
        const Gate& g = c.gate(id);
        if (g.kind != GateKind::And) continue;
        for (size_t i = 0; i < g.inputs.size(); ++i) {
            for (size_t j = i + 1; j < g.inputs.size(); ++j) {
                const auto& a = c.varset(g.inputs[i]);
                const auto& b = c.varset(g.inputs[j]);
                std::vector<FeatureId> inter;
                std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
                if (!inter.empty()) {
                    v.ok = false;
                    v.gate = id;
                    v.overlap = std::move(inter);
                    c.decomposable = TriState::VerifiedFalse;
                    if (c.certification == Certification::None) c.certification = Certification::ByCheck;
                    return v;
                }
            }
        }
    }
    v.ok = true;
    c.decomposable = TriState::VerifiedTrue;
    if (c.certification == Certification::None) c.certification = Certification::ByCheck;
    return v;
}

namespace {

// Union of all gates' scopes (features that occur in some Var gate).
std::vector<FeatureId> circuit_universe(const Circuit& c) {
    std::vector<uint8_t> seen(static_cast<size_t>(c.num_features()), 0);
    for (GateId id = 0; id < c.num_gates(); ++id) {
        const Gate& g = c.gate(id);
        if (g.kind == GateKind::Var) seen[static_cast<size_t>(g.feature)] = 1;
    }
    std::vector<FeatureId> out;
    for (FeatureId f = 0; f < c.num_features(); ++f)
        if (seen[static_cast<size_t>(f)]) out.push_back(f);
    return out;
}

DeterminismVerdict violation_at(const Circuit& c, GateId id, const BitEntity& e) {
    DeterminismVerdict v;
    v.kind = DeterminismVerdict::Kind::Violation;
    v.gate = id;
    for (FeatureId f : c.varset(id)) v.witness[f] = e[static_cast<size_t>(f)] != 0;
    return v;
}

} // namespace

DeterminismVerdict check_deterministic(Circuit& c, int budget) {
    std::vector<GateId> or_gates;
    for (GateId id = 0; id < c.num_gates(); ++id)
        if (c.gate(id).kind == GateKind::Or && c.gate(id).inputs.size() >= 2) or_gates.push_back(id);

    if (or_gates.empty()) {
        c.deterministic = TriState::VerifiedTrue;
        if (c.certification == Certification::None) c.certification = Certification::ByCheck;
        return {};
    }

    std::vector<FeatureId> universe = circuit_universe(c);
    BitEntity e(static_cast<size_t>(c.num_features()), 0);
    std::vector<uint8_t> vals;

    // Fast path: one sweep over total assignments covers every gate's
    // restricted assignment space, each 2^(n-|Var(g)|) times over.
    if (static_cast<int>(universe.size()) <= budget) {
        uint64_t total = uint64_t{1} << universe.size();
        for (uint64_t m = 0; m < total; ++m) {
            for (size_t k = 0; k < universe.size(); ++k)
                e[static_cast<size_t>(universe[k])] = (m >> k) & 1u;
            eval_all(c, e, vals);
            for (GateId id : or_gates) {
                int trues = 0;
                for (GateId in : c.gate(id).inputs) trues += vals[static_cast<size_t>(in)];
                if (trues > 1) {
                    c.deterministic = TriState::VerifiedFalse;
                    if (c.certification == Certification::None) c.certification = Certification::ByCheck;
                    return violation_at(c, id, e);
                }
            }
        }
        c.deterministic = TriState::VerifiedTrue;
        if (c.certification == Certification::None) c.certification = Certification::ByCheck;
        return {};
    }

    // Per-gate enumeration over the gate's own scope.
    for (GateId id : or_gates) {
        const auto& vs = c.varset(id);
        if (static_cast<int>(vs.size()) > budget) {
            DeterminismVerdict v;
            v.kind = DeterminismVerdict::Kind::BudgetExceeded;
            v.gate = id;
            return v; // flag stays Unchecked
        }
        uint64_t total = uint64_t{1} << vs.size();
        for (uint64_t m = 0; m < total; ++m) {
            std::fill(e.begin(), e.end(), 0);
            for (size_t k = 0; k < vs.size(); ++k) e[static_cast<size_t>(vs[k])] = (m >> k) & 1u;
            eval_all(c, e, vals);
            int trues = 0;
            for (GateId in : c.gate(id).inputs) trues += vals[static_cast<size_t>(in)];
            if (trues > 1) {
                c.deterministic = TriState::VerifiedFalse;
                if (c.certification == Certification::None) c.certification = Certification::ByCheck;
                return violation_at(c, id, e);
            }
        }
    }
    c.deterministic = TriState::VerifiedTrue;
    if (c.certification == Certification::None) c.certification = Certification::ByCheck;
    return {};
}

BigInt model_count(const Circuit& c) {
    if (!c.certified_ddbc())
        throw PreconditionError("model_count requires a certified dDBC; run the checks or use brute_force_count");
    // counts[g] = models of gate g over its own scope Var(g)
    std::vector<BigInt> counts(static_cast<size_t>(c.num_gates()));
    for (GateId id = 0; id < c.num_gates(); ++id) {
        const Gate& g = c.gate(id);
        BigInt n = 0;
        switch (g.kind) {
        case GateKind::Var:
            n = 1;
            break;
        case GateKind::Const:
            n = g.value ? 1 : 0;
            break;
        case GateKind::Not:
            n = pow2(static_cast<long long>(c.varset(g.inputs[0]).size())) - counts[static_cast<size_t>(g.inputs[0])];
            break;
        case GateKind::And:
            n = 1;
            for (GateId in : g.inputs) n *= counts[static_cast<size_t>(in)];
            break;
        case GateKind::Or: {
            // children are mutually exclusive; smooth each to the union scope
            const auto& vs = c.varset(id);
            for (GateId in : g.inputs) {
                long long missing = static_cast<long long>(vs.size() - c.varset(in).size());
                n += counts[static_cast<size_t>(in)] * pow2(missing);
            }
            break;
        }
        }
        counts[static_cast<size_t>(id)] = std::move(n);
    }
    return counts[static_cast<size_t>(c.output())];
}

BigInt brute_force_count(const Circuit& c, int cap) {
    const auto& vs = c.output_varset();
    if (static_cast<int>(vs.size()) > cap)
        throw CapExceededError("brute_force_count: " + std::to_string(vs.size()) + " output vars exceed cap " +
                               std::to_string(cap));
    BitEntity e(static_cast<size_t>(c.num_features()), 0);
    BigInt n = 0;
    uint64_t total = uint64_t{1} << vs.size();
    for (uint64_t m = 0; m < total; ++m) {
        for (size_t k = 0; k < vs.size(); ++k) e[static_cast<size_t>(vs[k])] = (m >> k) & 1u;
        if (eval(c, e)) ++n;
    }
    return n;
}

DistanceCounts count_by_distance(const Circuit& c, const BitEntity& e) {
    if (!c.certified_ddbc())
        throw PreconditionError("count_by_distance requires a certified dDBC");
    if (e.size() < static_cast<size_t>(c.num_features()))
        throw PreconditionError("count_by_distance: entity must be total over the circuit's features");

    // per-gate vectors over the gate's own scope; counts[g][l] = models of g
    // at Hamming distance l from e restricted to Var(g)
    std::vector<std::vector<BigInt>> counts(static_cast<size_t>(c.num_gates()));
    for (GateId id = 0; id < c.num_gates(); ++id) {
        const Gate& g = c.gate(id);
        std::vector<BigInt> v;
        switch (g.kind) {
        case GateKind::Var:
            v = {BigInt(0), BigInt(0)};
            v[e[static_cast<size_t>(g.feature)] ? 0 : 1] = 1;
            break;
        case GateKind::Const:
            v = {BigInt(g.value ? 1 : 0)};
            break;
        case GateKind::Not: {
            const auto& child = counts[static_cast<size_t>(g.inputs[0])];
            long long nv = static_cast<long long>(c.varset(id).size());
            v.resize(static_cast<size_t>(nv) + 1);
            for (long long l = 0; l <= nv; ++l)
                v[static_cast<size_t>(l)] = binomial(nv, l) - child[static_cast<size_t>(l)];
            break;
        }
        case GateKind::And: {
            // disjoint scopes: convolution
            v = {BigInt(1)};
            for (GateId in : g.inputs) {
                const auto& child = counts[static_cast<size_t>(in)];
                std::vector<BigInt> next(v.size() + child.size() - 1);
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
            // mutually exclusive children; smooth each to the union scope:
            // the missing vars contribute a free binomial choice of flips
            long long nv = static_cast<long long>(c.varset(id).size());
            v.assign(static_cast<size_t>(nv) + 1, BigInt(0));
            for (GateId in : g.inputs) {
                const auto& child = counts[static_cast<size_t>(in)];
                long long missing = nv - static_cast<long long>(c.varset(in).size());
                for (size_t j = 0; j < child.size(); ++j) {
                    if (child[j] == 0) continue;
                    for (long long l = static_cast<long long>(j); l <= static_cast<long long>(j) + missing; ++l)
                        v[static_cast<size_t>(l)] += child[j] * binomial(missing, l - static_cast<long long>(j));
                }
            }
            break;
        }
        }
        counts[static_cast<size_t>(id)] = std::move(v);
    }

    DistanceCounts out;
    out.scope = c.output_varset();
    out.counts = std::move(counts[static_cast<size_t>(c.output())]);
    out.counts.resize(out.scope.size() + 1); // Const output: pad to scope size
    return out;
}

Circuit restrict_feature(const Circuit& c, FeatureId f, bool b) {
    Circuit out;
    for (const auto& name : c.feature_names()) out.intern_feature(name);
    TriState dec = c.decomposable, det = c.deterministic;
    Certification cert = c.certification;
    for (GateId id = 0; id < c.num_gates(); ++id) {
        const Gate& g = c.gate(id);
        GateId nid = -1;
        if (g.kind == GateKind::Var && g.feature == f)
            nid = out.add_const(b);
        else {
            switch (g.kind) {
            case GateKind::Var: nid = out.add_var(g.feature); break;
            case GateKind::Const: nid = out.add_const(g.value); break;
            case GateKind::Not: nid = out.add_not(g.inputs[0]); break;
            case GateKind::And: nid = out.add_and(g.inputs); break;
            case GateKind::Or: nid = out.add_or(g.inputs); break;
            }
        }
        (void)nid; // ids are preserved one-to-one
    }
    if (c.has_output()) out.set_output(c.output());
    out.decomposable = dec;
    out.deterministic = det;
    out.certification = cert;
    return out;
}

Circuit complement(const Circuit& c) {
    Circuit out;
    for (const auto& name : c.feature_names()) out.intern_feature(name);
    TriState dec = c.decomposable, det = c.deterministic;
    Certification cert = c.certification;
    for (GateId id = 0; id < c.num_gates(); ++id) {
        const Gate& g = c.gate(id);
        switch (g.kind) {
        case GateKind::Var: out.add_var(g.feature); break;
        case GateKind::Const: out.add_const(g.value); break;
        case GateKind::Not: out.add_not(g.inputs[0]); break;
        case GateKind::And: out.add_and(g.inputs); break;
        case GateKind::Or: out.add_or(g.inputs); break;
        }
    }
    out.set_output(out.add_not(c.output()));
    out.decomposable = dec;
    out.deterministic = det;
    out.certification = cert;
    return out;
}

} // namespace xscore
