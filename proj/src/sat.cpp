#include "xscore/sat.hpp"

#include <algorithm>

#include "xscore/errors.hpp"

namespace xscore {

int Clausifier::atom_var(const std::string& name) {
    auto it = atom_ids_.find(name);
    if (it != atom_ids_.end()) return it->second;
    // original atoms must be allocated before any auxiliary appears; we
    // keep them contiguous by allocating auxiliaries lazily afterwards,
    // so interning a fresh atom after clausification began is rejected
    if (cnf_.num_vars != num_atoms())
        throw PreconditionError("atom interned after auxiliary variables were allocated");
    atom_names_.push_back(name);
    int id = ++cnf_.num_vars;
    atom_ids_.emplace(name, id);
    return id;
}

std::optional<int> Clausifier::find_atom(const std::string& name) const {
    auto it = atom_ids_.find(name);
    if (it == atom_ids_.end()) return std::nullopt;
    return it->second;
}

namespace {
void collect_into(const FormulaPtr& f, Clausifier& c) {
    std::vector<std::string> atoms;
    collect_atoms(f, atoms);
    for (const auto& a : atoms) c.atom_var(a);
}
} // namespace

int Clausifier::define(const FormulaPtr& f) {
    switch (f->kind) {
    case Formula::Kind::Atom:
        return atom_var(f->atom);
    case Formula::Kind::True: {
        int v = ++cnf_.num_vars;
        cnf_.clauses.push_back({v});
        return v;
    }
    case Formula::Kind::False: {
        int v = ++cnf_.num_vars;
        cnf_.clauses.push_back({-v});
        return v;
    }
    case Formula::Kind::Not:
        return -define(f->kids[0]);
    default:
        break;
    }
    int a = define(f->kids[0]);
    int b = define(f->kids[1]);
    int v = ++cnf_.num_vars;
    switch (f->kind) {
    case Formula::Kind::And:
        // v <-> (a & b)
        cnf_.clauses.push_back({-v, a});
        cnf_.clauses.push_back({-v, b});
        cnf_.clauses.push_back({v, -a, -b});
        break;
    case Formula::Kind::Or:
        cnf_.clauses.push_back({-v, a, b});
        cnf_.clauses.push_back({v, -a});
        cnf_.clauses.push_back({v, -b});
        break;
    case Formula::Kind::Implies:
        cnf_.clauses.push_back({-v, -a, b});
        cnf_.clauses.push_back({v, a});
        cnf_.clauses.push_back({v, -b});
        break;
    case Formula::Kind::Iff:
        cnf_.clauses.push_back({-v, -a, b});
        cnf_.clauses.push_back({-v, a, -b});
        cnf_.clauses.push_back({v, a, b});
        cnf_.clauses.push_back({v, -a, -b});
        break;
    default:
        throw PreconditionError("corrupt formula node");
    }
    return v;
}

void Clausifier::assert_formula(const FormulaPtr& f) {
    collect_into(f, *this); // intern original atoms first, keeping ids low
    cnf_.clauses.push_back({define(f)});
}

void Clausifier::assert_unit(const std::string& atom, bool positive) {
    int v = atom_var(atom);
    cnf_.clauses.push_back({positive ? v : -v});
}

bool dpll(const Cnf& cnf, std::vector<int8_t>& assignment) {
    // assignment[v]: -1 unassigned, 0 false, 1 true; index 1..num_vars
    struct Frame {
        int var;
        int8_t tried; // value just tried
        std::vector<int> trail; // vars assigned by propagation at this level
    };

    assignment.assign(static_cast<size_t>(cnf.num_vars) + 1, -1);

    auto value_of = [&](int lit) -> int8_t {
        int8_t v = assignment[static_cast<size_t>(std::abs(lit))];
        if (v < 0) return -1;
        return (lit > 0) == (v == 1) ? 1 : 0;
    };

    // returns false on conflict; records assigned vars in trail
    auto propagate = [&](std::vector<int>& trail) -> bool {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& cl : cnf.clauses) {
                int unassigned = 0, last = 0;
                bool satisfied = false;
                for (int lit : cl) {
                    int8_t v = value_of(lit);
                    if (v == 1) {
                        satisfied = true;
                        break;
                    }
                    if (v == -1) {
                        ++unassigned;
                        last = lit;
                    }
                }
                if (satisfied) continue;
                if (unassigned == 0) return false;
                if (unassigned == 1) {
                    assignment[static_cast<size_t>(std::abs(last))] = last > 0 ? 1 : 0;
                    trail.push_back(std::abs(last));
                    changed = true;
                }
            }
        }
        return true;
    };

    auto undo = [&](const std::vector<int>& trail) {
        for (int v : trail) assignment[static_cast<size_t>(v)] = -1;
    };

    std::vector<Frame> stack;
    {
        std::vector<int> trail;
        if (!propagate(trail)) {
            undo(trail);
            return false;
        }
        stack.push_back({0, 1, std::move(trail)}); // sentinel frame holds root propagation
    }

    for (;;) {
        int branch = 0;
        for (int v = 1; v <= cnf.num_vars; ++v)
            if (assignment[static_cast<size_t>(v)] < 0) {
                branch = v;
                break;
            }
        if (branch == 0) return true;

        // try true first, then false
        int8_t value = 1;
        for (;;) {
            assignment[static_cast<size_t>(branch)] = value;
            std::vector<int> trail = {branch};
            if (propagate(trail)) {
                stack.push_back({branch, value, std::move(trail)});
                break;
            }
            undo(trail);
            if (value == 1) {
                value = 0;
                continue;
            }
            // both values failed: backtrack
            bool dead = true;
            while (dead) {
                if (stack.size() == 1) return false;
                Frame f = std::move(stack.back());
                stack.pop_back();
                undo(f.trail);
                if (f.tried == 1) {
                    branch = f.var;
                    value = 0;
                    dead = false;
                }
            }
        }
    }
}

SatResult sat(const std::vector<FormulaPtr>& theory) {
    Clausifier cl;
    for (const auto& f : theory) collect_into(f, cl);
    for (const auto& f : theory) cl.assert_formula(f);
    std::vector<int8_t> assignment;
    SatResult r;
    r.satisfiable = dpll(cl.cnf(), assignment);
    if (r.satisfiable) {
        for (int i = 0; i < cl.num_atoms(); ++i) {
            int8_t v = assignment[static_cast<size_t>(i) + 1];
            r.model[cl.atom_names()[static_cast<size_t>(i)]] = v == 1; // unassigned means free; report false
        }
    }
    return r;
}

bool entails(const std::vector<FormulaPtr>& theory, const FormulaPtr& goal) {
    std::vector<FormulaPtr> refuted = theory;
    refuted.push_back(f_not(goal));
    return !sat(refuted).satisfiable;
}

} // namespace xscore
