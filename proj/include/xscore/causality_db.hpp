#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xscore/diagnosis.hpp"
#include "xscore/rational.hpp"

namespace xscore {

struct DbTuple {
    std::string relation;
    std::vector<std::string> values;

    bool operator==(const DbTuple& o) const { return relation == o.relation && values == o.values; }
    bool operator<(const DbTuple& o) const {
        if (relation != o.relation) return relation < o.relation;
        return values < o.values;
    }
};

// Relational instance with an endogenous/exogenous split; tuples are
// deduplicated, arities per relation must agree.
struct Instance {
    std::vector<DbTuple> tuples;          // sorted by (relation, values)
    std::vector<uint8_t> exogenous;       // aligned with tuples

    static Instance make(std::vector<DbTuple> tuples, const std::vector<DbTuple>& exogenous_tuples = {});

    std::vector<int> endogenous_indices() const;
    int index_of(const DbTuple& t) const; // -1 if absent
};

struct QueryTerm {
    bool is_var = true;
    std::string text;
};

struct QueryAtom {
    std::string relation;
    std::vector<QueryTerm> terms;
};

// Boolean conjunctive query `Q :- R(x,y), S(y).`; all variables
// existential. Bare identifiers are variables, quoted tokens constants.
struct ConjunctiveQuery {
    std::vector<QueryAtom> atoms;
};

ConjunctiveQuery parse_query(const std::string& text);
std::string render_query(const ConjunctiveQuery& q);

struct CqResult {
    bool holds = false;
    std::map<std::string, std::string> witness; // one homomorphism, lexicographically least
};

CqResult eval_cq(const Instance& db, const ConjunctiveQuery& q);

struct TupleCauseReport {
    DbTuple tuple;
    enum class Kind { Counterfactual, Actual, NotACause } kind = Kind::NotACause;
    std::vector<std::vector<DbTuple>> min_contingencies; // all minimum-cardinality witnesses
    Rational responsibility;                             // 1/(1+|Gamma|), 0 for non-causes
};

// Actual causes of a true query among endogenous tuples: t is a cause iff
// some endogenous contingency set G (t not in G) keeps the query true when
// removed but falsifies it once t is removed as well.
// Pre: eval_cq(db, q) holds; endogenous tuple count <= cap.
std::vector<TupleCauseReport> causes(const Instance& db, const ConjunctiveQuery& q, int cap = 20);

// The denial constraint forbidding the query's pattern.
struct DenialConstraint {
    ConjunctiveQuery body;
    std::string text() const;                 // logical rendering
    bool violated(const Instance& db) const;  // iff the query holds
};

DenialConstraint cq_to_denial(const ConjunctiveQuery& q);

// Causes-by-diagnosis encoding: one clause per homomorphism image, each an
// Or of the Ab atoms of the image's endogenous tuples. Exogenous tuples
// drop out; an image with no endogenous tuple yields an unsatisfiable
// constraint (no diagnosis can repair it). A false query produces no
// clauses. Components list every endogenous tuple's Ab atom.
struct CbdEncoding {
    DiagnosisProblem problem;
    std::vector<DbTuple> component_tuples;  // aligned with problem.components
};

CbdEncoding cbd_encoding(const Instance& db, const ConjunctiveQuery& q);

std::string ab_atom_name(const DbTuple& t);

} // namespace xscore
