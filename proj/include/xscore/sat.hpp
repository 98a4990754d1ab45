#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xscore/formula.hpp"

namespace xscore {

// CNF over integer variables 1..num_vars; literals are +-var.
struct Cnf {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
};

// Tseitin-style clausifier shared by a batch of formulas. Original atoms
// get the low variable ids (in first-use order); definitional auxiliaries
// sit above them and are hidden from reported models.
class Clausifier {
public:
    int atom_var(const std::string& name);              // 1-based, interning
    std::optional<int> find_atom(const std::string& name) const;
    void assert_formula(const FormulaPtr& f);           // adds clauses forcing f
    void assert_unit(const std::string& atom, bool positive);

    const Cnf& cnf() const { return cnf_; }
    int num_atoms() const { return static_cast<int>(atom_names_.size()); }
    const std::vector<std::string>& atom_names() const { return atom_names_; }

private:
    int define(const FormulaPtr& f);                    // returns a literal equivalent to f

    Cnf cnf_;
    std::vector<std::string> atom_names_;
    std::map<std::string, int> atom_ids_;
};

struct SatResult {
    bool satisfiable = false;
    // model over the original atoms only (auxiliaries hidden)
    std::map<std::string, bool> model;
};

// Plain DPLL with unit propagation; branches on the lowest-numbered
// unassigned variable, trying true first. Deterministic.
bool dpll(const Cnf& cnf, std::vector<int8_t>& assignment);

// Satisfiability of a conjunction of formulas.
SatResult sat(const std::vector<FormulaPtr>& theory);

// theory |= goal, decided by refutation.
bool entails(const std::vector<FormulaPtr>& theory, const FormulaPtr& goal);

} // namespace xscore
