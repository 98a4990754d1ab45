#include "xscore/dtree.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "xscore/errors.hpp"

namespace xscore {

int Schema::index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names[static_cast<size_t>(i)] == name) return i;
    return -1;
}

int Schema::value_index(int feature, const std::string& value) const {
    const auto& dom = domains[static_cast<size_t>(feature)];
    for (size_t i = 0; i < dom.size(); ++i)
        if (dom[i] == value) return static_cast<int>(i);
    return -1;
}

bool Schema::is_binary() const {
    for (const auto& dom : domains)
        if (dom.size() != 2 || dom[0] != "0" || dom[1] != "1") return false;
    return true;
}

bool DecisionTree::evaluate(const std::vector<int>& value_indices) const {
    int n = root;
    for (;;) {
        const DtNode& nd = nodes[static_cast<size_t>(n)];
        if (nd.leaf) return nd.label;
        int v = value_indices.at(static_cast<size_t>(nd.feature));
        n = nd.branches.at(static_cast<size_t>(v));
    }
}

DecisionTree binarize_dt(const DecisionTree& dt) {
    DecisionTree out;
    // indicator layout: feature F's k values occupy k consecutive slots
    std::vector<int> base(dt.schema.domains.size() + 1, 0);
    for (size_t f = 0; f < dt.schema.domains.size(); ++f) {
        if (dt.schema.domains[f].empty())
            throw PreconditionError("binarize_dt: feature '" + dt.schema.names[f] + "' has an empty domain");
        base[f + 1] = base[f] + static_cast<int>(dt.schema.domains[f].size());
        for (const auto& v : dt.schema.domains[f]) {
            out.schema.names.push_back(dt.schema.names[f] + "=" + v);
            out.schema.domains.push_back({"0", "1"});
        }
    }

    auto add_leaf = [&out](bool label) {
        DtNode nd;
        nd.leaf = true;
        nd.label = label;
        out.nodes.push_back(nd);
        return static_cast<int>(out.nodes.size()) - 1;
    };

    // rewrite each node bottom-up; memo keyed by original node id
    std::vector<int> memo(dt.nodes.size(), -1);
    std::function<int(int)> build = [&](int n) -> int {
        if (memo[static_cast<size_t>(n)] >= 0) return memo[static_cast<size_t>(n)];
        const DtNode& nd = dt.nodes[static_cast<size_t>(n)];
        int result;
        if (nd.leaf) {
            result = add_leaf(nd.label);
        } else {
            int f = nd.feature;
            int k = static_cast<int>(dt.schema.domains[static_cast<size_t>(f)].size());
            std::vector<int> children(static_cast<size_t>(k));
            for (int v = 0; v < k; ++v) children[static_cast<size_t>(v)] = build(nd.branches[static_cast<size_t>(v)]);
            // chain of indicator tests; the last test keeps both branches on
            // the same child so that every indicator of F appears on the path
            int next = children[static_cast<size_t>(k - 1)];
            {
                DtNode t;
                t.feature = base[static_cast<size_t>(f)] + k - 1;
                t.branches = {next, next};
                out.nodes.push_back(t);
                next = static_cast<int>(out.nodes.size()) - 1;
            }
            for (int v = k - 2; v >= 0; --v) {
                DtNode t;
                t.feature = base[static_cast<size_t>(f)] + v;
                t.branches = {next, children[static_cast<size_t>(v)]};
                out.nodes.push_back(t);
                next = static_cast<int>(out.nodes.size()) - 1;
            }
            result = next;
        }
        memo[static_cast<size_t>(n)] = result;
        return result;
    };
    out.root = build(dt.root);
    return out;
}

std::vector<int> one_hot_entity(const Schema& original, const std::vector<int>& value_indices) {
    std::vector<int> out;
    for (size_t f = 0; f < original.domains.size(); ++f)
        for (size_t v = 0; v < original.domains[f].size(); ++v)
            out.push_back(value_indices[f] == static_cast<int>(v) ? 1 : 0);
    return out;
}

namespace {

// features tested at or below each node (transitively)
void tested_below(const DecisionTree& dt, int n, std::vector<std::vector<uint8_t>>& memo) {
    auto& mine = memo[static_cast<size_t>(n)];
    if (!mine.empty()) return;
    mine.assign(dt.schema.domains.size(), 0);
    const DtNode& nd = dt.nodes[static_cast<size_t>(n)];
    if (nd.leaf) return;
    mine[static_cast<size_t>(nd.feature)] = 1;
    for (int ch : nd.branches) {
        tested_below(dt, ch, memo);
        const auto& sub = memo[static_cast<size_t>(ch)];
        for (size_t f = 0; f < sub.size(); ++f) mine[f] |= sub[f];
    }
}

} // namespace

Circuit compile_dt(const DecisionTree& dt) {
    if (!dt.schema.is_binary())
        throw PreconditionError("compile_dt expects a binary tree; run binarize_dt first");

    // no feature may be retested below a node that already tests it
    std::vector<std::vector<uint8_t>> below(dt.nodes.size());
    tested_below(dt, dt.root, below);
    for (size_t n = 0; n < dt.nodes.size(); ++n) {
        const DtNode& nd = dt.nodes[n];
        if (nd.leaf || below[n].empty()) continue;
        for (int ch : nd.branches)
            if (!below[static_cast<size_t>(ch)].empty() &&
                below[static_cast<size_t>(ch)][static_cast<size_t>(nd.feature)])
                throw PreconditionError("compile_dt: feature '" +
                                        dt.schema.names[static_cast<size_t>(nd.feature)] +
                                        "' is retested along a path");
    }

    Circuit c;
    std::vector<FeatureId> fid(dt.schema.names.size());
    for (size_t f = 0; f < dt.schema.names.size(); ++f) fid[f] = c.intern_feature(dt.schema.names[f]);

    // shared leaf gates
    GateId const_gate[2] = {-1, -1};
    auto get_const = [&](bool b) {
        int i = b ? 1 : 0;
        if (const_gate[i] < 0) const_gate[i] = c.add_const(b);
        return const_gate[i];
    };
    std::vector<GateId> var_gate(dt.schema.names.size(), -1);
    std::vector<GateId> negvar_gate(dt.schema.names.size(), -1);
    auto get_var = [&](int f, bool positive) {
        if (var_gate[static_cast<size_t>(f)] < 0) {
            var_gate[static_cast<size_t>(f)] = c.add_var(fid[static_cast<size_t>(f)]);
            negvar_gate[static_cast<size_t>(f)] = c.add_not(var_gate[static_cast<size_t>(f)]);
        }
        return positive ? var_gate[static_cast<size_t>(f)] : negvar_gate[static_cast<size_t>(f)];
    };

    // guarded mux per internal node: (!x & c0) | (x & c1); deterministic
    // because the guards are exclusive, decomposable because the feature is
    // never retested below
    std::vector<GateId> memo(dt.nodes.size(), -1);
    std::function<GateId(int)> build = [&](int n) -> GateId {
        if (memo[static_cast<size_t>(n)] >= 0) return memo[static_cast<size_t>(n)];
        const DtNode& nd = dt.nodes[static_cast<size_t>(n)];
        GateId g;
        if (nd.leaf) {
            g = get_const(nd.label);
        } else {
            GateId c0 = build(nd.branches[0]);
            GateId c1 = build(nd.branches[1]);
            GateId left = c.add_and({get_var(nd.feature, false), c0});
            GateId right = c.add_and({get_var(nd.feature, true), c1});
            g = c.add_or({left, right});
        }
        memo[static_cast<size_t>(n)] = g;
        return g;
    };
    c.set_output(build(dt.root));
    c.certify_by_construction();
    return c;
}

CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula f;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    long long num_clauses = -1;
    std::vector<int> current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (!header) {
            std::string p, kind;
            if (!(ls >> p >> kind >> f.num_vars >> num_clauses) || p != "p" || kind != "cnf")
                throw ParseError("dimacs: expected header 'p cnf <vars> <clauses>'");
            if (f.num_vars < 0 || num_clauses < 0) throw ParseError("dimacs: negative counts in header");
            header = true;
            continue;
        }
        long long lit;
        while (ls >> lit) {
            if (lit == 0) {
                f.clauses.push_back(current);
                current.clear();
            } else {
                if (std::llabs(lit) > f.num_vars)
                    throw ParseError("dimacs: literal " + std::to_string(lit) + " out of range");
                current.push_back(static_cast<int>(lit));
            }
        }
        if (!ls.eof()) throw ParseError("dimacs: unreadable token in clause section");
    }
    if (!header) throw ParseError("dimacs: missing header");
    if (!current.empty()) f.clauses.push_back(current); // tolerate missing final 0
    if (num_clauses >= 0 && static_cast<long long>(f.clauses.size()) != num_clauses)
        throw ParseError("dimacs: header promises " + std::to_string(num_clauses) + " clauses, found " +
                         std::to_string(f.clauses.size()));
    return f;
}

Circuit cnf_to_circuit(const CnfFormula& f) {
    Circuit c;
    std::vector<GateId> pos(static_cast<size_t>(f.num_vars));
    std::vector<GateId> neg(static_cast<size_t>(f.num_vars), -1);
    for (int i = 0; i < f.num_vars; ++i)
        pos[static_cast<size_t>(i)] = c.add_var(c.intern_feature("x" + std::to_string(i + 1)));
    auto literal_gate = [&](int lit) {
        size_t v = static_cast<size_t>(std::abs(lit) - 1);
        if (lit > 0) return pos[v];
        if (neg[v] < 0) neg[v] = c.add_not(pos[v]);
        return neg[v];
    };
    std::vector<GateId> clause_gates;
    for (const auto& cl : f.clauses) {
        if (cl.empty()) {
            clause_gates.push_back(c.add_const(false));
            continue;
        }
        std::vector<GateId> lits;
        for (int lit : cl) lits.push_back(literal_gate(lit));
        clause_gates.push_back(lits.size() == 1 ? lits[0] : c.add_or(lits));
    }
    if (clause_gates.empty())
        c.set_output(c.add_const(true));
    else if (clause_gates.size() == 1)
        c.set_output(clause_gates[0]);
    else
        c.set_output(c.add_and(clause_gates));
    return c;
}

} // namespace xscore
