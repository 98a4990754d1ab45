#include "xscore/formula.hpp"

#include <algorithm>
#include <cctype>

#include "xscore/errors.hpp"

namespace xscore {

namespace {
FormulaPtr mk(Formula::Kind k, std::string atom, std::vector<FormulaPtr> kids) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->atom = std::move(atom);
    f->kids = std::move(kids);
    return f;
}
} // namespace

FormulaPtr f_atom(std::string name) { return mk(Formula::Kind::Atom, std::move(name), {}); }
FormulaPtr f_not(FormulaPtr a) { return mk(Formula::Kind::Not, "", {std::move(a)}); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return mk(Formula::Kind::And, "", {std::move(a), std::move(b)}); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return mk(Formula::Kind::Or, "", {std::move(a), std::move(b)}); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
    return mk(Formula::Kind::Implies, "", {std::move(a), std::move(b)});
}
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) { return mk(Formula::Kind::Iff, "", {std::move(a), std::move(b)}); }
FormulaPtr f_true() { return mk(Formula::Kind::True, "", {}); }
FormulaPtr f_false() { return mk(Formula::Kind::False, "", {}); }

FormulaPtr f_conj(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return f_true();
    FormulaPtr out = fs.back();
    for (size_t i = fs.size() - 1; i-- > 0;) out = f_and(fs[i], out);
    return out;
}

FormulaPtr f_disj(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return f_false();
    FormulaPtr out = fs.back();
    for (size_t i = fs.size() - 1; i-- > 0;) out = f_or(fs[i], out);
    return out;
}

namespace {

struct Parser {
    const std::string& text;
    size_t pos = 0;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(const char* tok) {
        skip_ws();
        size_t len = std::char_traits<char>::length(tok);
        if (text.compare(pos, len, tok) == 0) {
            pos += len;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("formula: " + what + " at position " + std::to_string(pos) + " in '" + text + "'");
    }

    // iff := implies ('<->' iff)?
    FormulaPtr parse_iff() {
        FormulaPtr a = parse_implies();
        if (eat("<->")) return f_iff(a, parse_iff());
        return a;
    }

    // implies := or ('->' implies)?
    FormulaPtr parse_implies() {
        FormulaPtr a = parse_or();
        skip_ws();
        // careful: '->' must not swallow the '-' of a future token; our
        // alphabet has no other '-' so a direct match is enough
        if (text.compare(pos, 3, "<->") != 0 && eat("->")) return f_implies(a, parse_implies());
        return a;
    }

    FormulaPtr parse_or() {
        FormulaPtr a = parse_and();
        while (true) {
            skip_ws();
            if (text.compare(pos, 1, "|") == 0) {
                ++pos;
                a = f_or(a, parse_and());
            } else
                break;
        }
        return a;
    }

    FormulaPtr parse_and() {
        FormulaPtr a = parse_unary();
        while (true) {
            skip_ws();
            if (text.compare(pos, 1, "&") == 0) {
                ++pos;
                a = f_and(a, parse_unary());
            } else
                break;
        }
        return a;
    }

    FormulaPtr parse_unary() {
        skip_ws();
        if (eat("!")) return f_not(parse_unary());
        if (eat("(")) {
            FormulaPtr a = parse_iff();
            if (!eat(")")) fail("expected ')'");
            return a;
        }
        return parse_atom();
    }

    FormulaPtr parse_atom() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size()) {
            char ch = text[pos];
            if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')
                ++pos;
            else
                break;
        }
        if (pos == start) fail("expected an atom");
        std::string name = text.substr(start, pos - start);
        if (std::isdigit(static_cast<unsigned char>(name[0]))) fail("atom names must not start with a digit");
        if (name == "true") return f_true();
        if (name == "false") return f_false();
        return f_atom(std::move(name));
    }

    FormulaPtr parse_all() {
        FormulaPtr a = parse_iff();
        skip_ws();
        if (pos != text.size()) fail("trailing input");
        return a;
    }
};

} // namespace

FormulaPtr parse_formula(const std::string& text) { return Parser(text).parse_all(); }

namespace {

int precedence(Formula::Kind k) {
    switch (k) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    default: return 5;
    }
}

void render(const FormulaPtr& f, int parent_prec, std::string& out) {
    int prec = precedence(f->kind);
    bool paren = prec < parent_prec;
    if (paren) out += "(";
    switch (f->kind) {
    case Formula::Kind::Atom: out += f->atom; break;
    case Formula::Kind::True: out += "true"; break;
    case Formula::Kind::False: out += "false"; break;
    case Formula::Kind::Not:
        out += "!";
        render(f->kids[0], 5, out);
        break;
    case Formula::Kind::And:
        render(f->kids[0], 4, out);
        out += " & ";
        render(f->kids[1], 4, out);
        break;
    case Formula::Kind::Or:
        render(f->kids[0], 3, out);
        out += " | ";
        render(f->kids[1], 3, out);
        break;
    case Formula::Kind::Implies:
        render(f->kids[0], 3, out); // right-assoc: left child needs parens at equal prec
        out += " -> ";
        render(f->kids[1], 2, out);
        break;
    case Formula::Kind::Iff:
        render(f->kids[0], 2, out);
        out += " <-> ";
        render(f->kids[1], 1, out);
        break;
    }
    if (paren) out += ")";
}

} // namespace

std::string render_formula(const FormulaPtr& f) {
    std::string out;
    render(f, 0, out);
    return out;
}

void collect_atoms(const FormulaPtr& f, std::vector<std::string>& out) {
    if (f->kind == Formula::Kind::Atom) {
        if (std::find(out.begin(), out.end(), f->atom) == out.end()) out.push_back(f->atom);
        return;
    }
    for (const auto& k : f->kids) collect_atoms(k, out);
}

bool eval_formula(const FormulaPtr& f, const std::vector<std::pair<std::string, bool>>& assignment) {
    switch (f->kind) {
    case Formula::Kind::Atom:
        for (const auto& [name, v] : assignment)
            if (name == f->atom) return v;
        throw PreconditionError("assignment does not cover atom '" + f->atom + "'");
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Not: return !eval_formula(f->kids[0], assignment);
    case Formula::Kind::And: return eval_formula(f->kids[0], assignment) && eval_formula(f->kids[1], assignment);
    case Formula::Kind::Or: return eval_formula(f->kids[0], assignment) || eval_formula(f->kids[1], assignment);
    case Formula::Kind::Implies:
        return !eval_formula(f->kids[0], assignment) || eval_formula(f->kids[1], assignment);
    case Formula::Kind::Iff: return eval_formula(f->kids[0], assignment) == eval_formula(f->kids[1], assignment);
    }
    throw PreconditionError("corrupt formula node");
}

} // namespace xscore
