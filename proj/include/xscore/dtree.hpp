#pragma once

#include <string>
#include <vector>

#include "xscore/circuit.hpp"

namespace xscore {

// Feature schema with finite string domains; order is significant.
struct Schema {
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> domains;

    int size() const { return static_cast<int>(names.size()); }
    int index_of(const std::string& name) const; // -1 if absent
    int value_index(int feature, const std::string& value) const; // -1 if absent
    bool is_binary() const; // every domain is exactly ["0","1"]
};

struct DtNode {
    bool leaf = false;
    bool label = false;              // leaf only
    int feature = -1;                // internal only
    std::vector<int> branches;       // internal: child per domain value index
};

// Rooted decision DAG (trees may share subtrees); acyclic, branch maps
// total over the tested feature's domain.
struct DecisionTree {
    Schema schema;
    std::vector<DtNode> nodes;
    int root = -1;

    bool evaluate(const std::vector<int>& value_indices) const;
    int node_count() const { return static_cast<int>(nodes.size()); }
};

// One-hot rewrite of a tree over arbitrary finite domains: each original
// feature F with domain {v1..vk} becomes k binary indicator features
// "F=v1".."F=vk". Exact on one-hot consistent inputs.
DecisionTree binarize_dt(const DecisionTree& dt);

// Maps an original entity to the indicator entity of binarize_dt's schema.
std::vector<int> one_hot_entity(const Schema& original, const std::vector<int>& value_indices);

// Compile a binary tree into a circuit that is deterministic and
// decomposable by construction. Pre: binary schema, no feature retested
// along any root-to-leaf path. Gate count is linear in the node count.
Circuit compile_dt(const DecisionTree& dt);

struct CnfFormula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses; // DIMACS literals, no zeros
};

CnfFormula parse_dimacs(const std::string& text);

// And-of-Ors circuit over features "x1".."xn"; no certification flags.
Circuit cnf_to_circuit(const CnfFormula& f);

} // namespace xscore
