#pragma once

#include <memory>
#include <string>
#include <vector>

namespace xscore {

// Propositional formula AST. Connectives: ! & | -> <->; atoms are
// identifiers. Shared subtrees are fine; nodes are immutable.
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { Atom, Not, And, Or, Implies, Iff, True, False };
    Kind kind;
    std::string atom;              // Atom only
    std::vector<FormulaPtr> kids;  // Not: 1, binary connectives: 2
};

FormulaPtr f_atom(std::string name);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr f_true();
FormulaPtr f_false();

// n-ary helpers (right-nested); empty input yields the unit.
FormulaPtr f_conj(const std::vector<FormulaPtr>& fs);
FormulaPtr f_disj(const std::vector<FormulaPtr>& fs);

// Precedence: ! > & > | > -> > <->; -> and <-> associate to the right.
FormulaPtr parse_formula(const std::string& text);

std::string render_formula(const FormulaPtr& f);

// Atom names in first-appearance order (depth-first).
void collect_atoms(const FormulaPtr& f, std::vector<std::string>& out);

bool eval_formula(const FormulaPtr& f, const std::vector<std::pair<std::string, bool>>& assignment);

} // namespace xscore
