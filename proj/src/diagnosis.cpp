#include "xscore/diagnosis.hpp"

#include <algorithm>

#include "xscore/errors.hpp"

namespace xscore {

namespace {

bool is_subset(const std::vector<int>& small, const std::vector<int>& big) {
    // both sorted
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// enumerate sorted index subsets of {0..n-1} of size k, lexicographic
struct Combinations {
    int n, k;
    std::vector<int> idx;
    bool done = false;

    Combinations(int n_, int k_) : n(n_), k(k_) {
        if (k > n) {
            done = true;
            return;
        }
        idx.resize(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
    }

    void advance() {
        int pos = k - 1;
        while (pos >= 0) {
            ++idx[static_cast<size_t>(pos)];
            if (idx[static_cast<size_t>(pos)] <= n - (k - pos)) {
                for (int j = pos + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
                return;
            }
            --pos;
        }
        done = true;
    }
};

// SAT oracle with a clausified base and per-call unit assumptions.
struct IncrementalSat {
    Clausifier cl;
    Cnf base;

    void freeze() { base = cl.cnf(); }

    bool sat_with(const std::vector<std::pair<std::string, bool>>& units) {
        Cnf work = base;
        for (const auto& [atom, val] : units) {
            auto v = cl.find_atom(atom);
            if (!v) throw PreconditionError("unknown atom '" + atom + "'");
            work.clauses.push_back({val ? *v : -*v});
        }
        std::vector<int8_t> assignment;
        return dpll(work, assignment);
    }
};

} // namespace

std::vector<Diagnosis> diagnoses(const DiagnosisProblem& p, DiagnosisMode mode, int cap) {
    int n = static_cast<int>(p.components.size());
    if (n > cap)
        throw CapExceededError("diagnoses: " + std::to_string(n) + " components exceed cap " + std::to_string(cap));

    IncrementalSat oracle;
    for (const auto& f : p.model) {
        std::vector<std::string> atoms;
        collect_atoms(f, atoms);
        for (const auto& a : atoms) oracle.cl.atom_var(a);
    }
    for (const auto& f : p.observation) {
        std::vector<std::string> atoms;
        collect_atoms(f, atoms);
        for (const auto& a : atoms) oracle.cl.atom_var(a);
    }
    for (const auto& c : p.components) oracle.cl.atom_var(c);
    for (const auto& f : p.model) oracle.cl.assert_formula(f);
    for (const auto& f : p.observation) oracle.cl.assert_formula(f);
    oracle.freeze();

    auto consistent = [&](const std::vector<int>& abnormal) {
        std::vector<std::pair<std::string, bool>> units;
        size_t next = 0;
        for (int i = 0; i < n; ++i) {
            bool ab = next < abnormal.size() && abnormal[next] == i;
            if (ab) ++next;
            units.emplace_back(p.components[static_cast<size_t>(i)], ab);
        }
        return oracle.sat_with(units);
    };

    std::vector<Diagnosis> out;
    std::vector<std::vector<int>> minimal_found;
    for (int k = 0; k <= n; ++k) {
        if (mode == DiagnosisMode::Minimum && !out.empty()) break;
        for (Combinations comb(n, k); !comb.done; comb.advance()) {
            bool covered = false;
            for (const auto& m : minimal_found)
                if (is_subset(m, comb.idx)) {
                    covered = true;
                    break;
                }
            // covered candidates cannot be minimal, but in All mode their
            // consistency still has to be decided on its own
            if (covered && mode != DiagnosisMode::All) continue;
            if (!consistent(comb.idx)) continue;
            Diagnosis d;
            d.abnormal = comb.idx;
            d.minimal = !covered;
            if (!covered) minimal_found.push_back(comb.idx);
            out.push_back(std::move(d));
        }
    }

    // minimum = minimal of least cardinality
    size_t best = SIZE_MAX;
    for (const auto& d : out)
        if (d.minimal) best = std::min(best, d.abnormal.size());
    for (auto& d : out)
        d.minimum = d.minimal && d.abnormal.size() == best;

    if (mode == DiagnosisMode::Minimum) {
        std::vector<Diagnosis> keep;
        for (auto& d : out)
            if (d.minimum) keep.push_back(std::move(d));
        return keep;
    }
    return out;
}

AbductionResult abduce(const AbductionProblem& p, int cap) {
    int n = static_cast<int>(p.hypotheses.size());
    if (n > cap)
        throw CapExceededError("abduce: " + std::to_string(n) + " hypotheses exceed cap " + std::to_string(cap));

    FormulaPtr obs = f_conj(p.observation);

    // theory + H |= obs  iff  theory + H + !obs unsat
    IncrementalSat entail_oracle;
    IncrementalSat consistency_oracle;
    for (auto* oracle : {&entail_oracle, &consistency_oracle}) {
        for (const auto& f : p.theory) {
            std::vector<std::string> atoms;
            collect_atoms(f, atoms);
            for (const auto& a : atoms) oracle->cl.atom_var(a);
        }
        std::vector<std::string> atoms;
        collect_atoms(obs, atoms);
        for (const auto& a : atoms) oracle->cl.atom_var(a);
        for (const auto& h : p.hypotheses) oracle->cl.atom_var(h);
        for (const auto& f : p.theory) oracle->cl.assert_formula(f);
    }
    entail_oracle.cl.assert_formula(f_not(obs));
    entail_oracle.freeze();
    consistency_oracle.freeze();

    auto explains = [&](const std::vector<int>& hyp) {
        std::vector<std::pair<std::string, bool>> units;
        for (int i : hyp) units.emplace_back(p.hypotheses[static_cast<size_t>(i)], true);
        return !entail_oracle.sat_with(units) && consistency_oracle.sat_with(units);
    };

    AbductionResult r;
    std::vector<std::vector<int>> found;
    for (int k = 0; k <= n; ++k) {
        for (Combinations comb(n, k); !comb.done; comb.advance()) {
            bool covered = false;
            for (const auto& m : found)
                if (is_subset(m, comb.idx)) {
                    covered = true;
                    break;
                }
            if (covered) continue;
            if (explains(comb.idx)) found.push_back(comb.idx);
        }
    }
    r.explanations = std::move(found);
    r.entailed_without_hypotheses =
        !r.explanations.empty() && r.explanations.front().empty();
    return r;
}

std::vector<LogicalCauseReport> actual_causes_logical(const CausalSetting& s, int cap) {
    int n = static_cast<int>(s.intervenable.size());
    if (n > cap)
        throw CapExceededError("actual_causes_logical: " + std::to_string(n) + " intervenable literals exceed cap " +
                               std::to_string(cap));

    IncrementalSat oracle;
    for (const auto& f : s.theory) {
        std::vector<std::string> atoms;
        collect_atoms(f, atoms);
        for (const auto& a : atoms) oracle.cl.atom_var(a);
    }
    {
        std::vector<std::string> atoms;
        collect_atoms(s.observation, atoms);
        for (const auto& a : atoms) oracle.cl.atom_var(a);
    }
    for (const auto& l : s.exogenous) oracle.cl.atom_var(l.atom);
    for (const auto& l : s.intervenable) oracle.cl.atom_var(l.atom);
    for (const auto& f : s.theory) oracle.cl.assert_formula(f);
    oracle.cl.assert_formula(f_not(s.observation)); // refutation target
    oracle.freeze();

    // flipped[i] true: literal i takes the negation of its base value
    auto entails_obs = [&](const std::vector<uint8_t>& flipped) {
        std::vector<std::pair<std::string, bool>> units;
        for (const auto& l : s.exogenous) units.emplace_back(l.atom, l.value);
        for (int i = 0; i < n; ++i)
            units.emplace_back(s.intervenable[static_cast<size_t>(i)].atom,
                               flipped[static_cast<size_t>(i)] ? !s.intervenable[static_cast<size_t>(i)].value
                                                               : s.intervenable[static_cast<size_t>(i)].value);
        return !oracle.sat_with(units); // theory + literals + !obs unsat
    };

    std::vector<uint8_t> base(static_cast<size_t>(n), 0);
    if (!entails_obs(base))
        throw PreconditionError("base setting does not entail the observation");

    std::vector<LogicalCauseReport> out;
    for (int v = 0; v < n; ++v) {
        std::vector<int> others;
        for (int i = 0; i < n; ++i)
            if (i != v) others.push_back(i);

        LogicalCauseReport rep;
        rep.atom = s.intervenable[static_cast<size_t>(v)].atom;
        rep.responsibility = 0;

        bool settled = false;
        for (int k = 0; k <= static_cast<int>(others.size()) && !settled; ++k) {
            for (Combinations comb(static_cast<int>(others.size()), k); !comb.done; comb.advance()) {
                std::vector<uint8_t> flipped(static_cast<size_t>(n), 0);
                for (int i : comb.idx) flipped[static_cast<size_t>(others[static_cast<size_t>(i)])] = 1;
                // contingency alone must keep the observation entailed
                if (!entails_obs(flipped)) continue;
                flipped[static_cast<size_t>(v)] = 1;
                if (entails_obs(flipped)) continue;
                rep.kind = k == 0 ? LogicalCauseReport::Kind::Counterfactual : LogicalCauseReport::Kind::Actual;
                rep.responsibility = Rational(1, 1 + k);
                for (int i : comb.idx)
                    rep.contingency.push_back(s.intervenable[static_cast<size_t>(others[static_cast<size_t>(i)])].atom);
                settled = true;
                break;
            }
        }
        out.push_back(std::move(rep));
    }
    return out;
}

} // namespace xscore
