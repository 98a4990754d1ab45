#include "xscore/causality_db.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "xscore/errors.hpp"

namespace xscore {

Instance Instance::make(std::vector<DbTuple> tuples, const std::vector<DbTuple>& exogenous_tuples) {
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());

    std::map<std::string, size_t> arity;
    for (const auto& t : tuples) {
        auto [it, fresh] = arity.emplace(t.relation, t.values.size());
        if (!fresh && it->second != t.values.size())
            throw ParseError("relation '" + t.relation + "' has tuples of different arities");
    }

    Instance db;
    db.tuples = std::move(tuples);
    db.exogenous.assign(db.tuples.size(), 0);
    for (const auto& ex : exogenous_tuples) {
        int i = db.index_of(ex);
        if (i < 0)
            throw ParseError("exogenous tuple " + ex.relation + " not present in the instance");
        db.exogenous[static_cast<size_t>(i)] = 1;
    }
    return db;
}

std::vector<int> Instance::endogenous_indices() const {
    std::vector<int> out;
    for (size_t i = 0; i < tuples.size(); ++i)
        if (!exogenous[i]) out.push_back(static_cast<int>(i));
    return out;
}

int Instance::index_of(const DbTuple& t) const {
    auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
    if (it == tuples.end() || !(*it == t)) return -1;
    return static_cast<int>(it - tuples.begin());
}

namespace {

struct QueryParser {
    const std::string& text;
    size_t pos = 0;

    explicit QueryParser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("query: " + what + " at position " + std::to_string(pos));
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) fail("expected an identifier");
        return text.substr(start, pos - start);
    }

    QueryTerm term() {
        skip_ws();
        if (pos < text.size() && (text[pos] == '\'' || text[pos] == '"')) {
            char quote = text[pos++];
            size_t start = pos;
            while (pos < text.size() && text[pos] != quote) ++pos;
            if (pos == text.size()) fail("unterminated quoted constant");
            QueryTerm t;
            t.is_var = false;
            t.text = text.substr(start, pos - start);
            ++pos;
            return t;
        }
        QueryTerm t;
        t.is_var = true;
        t.text = ident();
        return t;
    }

    ConjunctiveQuery parse() {
        std::string head = ident();
        (void)head; // head name is conventional, commonly Q
        skip_ws();
        if (!(eat(':') && eat('-'))) fail("expected ':-'");
        ConjunctiveQuery q;
        for (;;) {
            QueryAtom a;
            a.relation = ident();
            if (!eat('(')) fail("expected '('");
            if (!eat(')')) {
                for (;;) {
                    a.terms.push_back(term());
                    if (eat(')')) break;
                    if (!eat(',')) fail("expected ',' or ')'");
                }
            }
            q.atoms.push_back(std::move(a));
            if (eat('.')) break;
            if (!eat(',')) fail("expected ',' or '.'");
        }
        skip_ws();
        if (pos != text.size()) fail("trailing input");
        if (q.atoms.empty()) fail("query needs at least one atom");
        return q;
    }
};

std::string render_term(const QueryTerm& t) {
    if (t.is_var) return t.text;
    return "'" + t.text + "'";
}

std::string render_atom(const QueryAtom& a) {
    std::string out = a.relation + "(";
    for (size_t i = 0; i < a.terms.size(); ++i) {
        if (i) out += ",";
        out += render_term(a.terms[i]);
    }
    return out + ")";
}

} // namespace

ConjunctiveQuery parse_query(const std::string& text) { return QueryParser(text).parse(); }

std::string render_query(const ConjunctiveQuery& q) {
    std::string out = "Q :- ";
    for (size_t i = 0; i < q.atoms.size(); ++i) {
        if (i) out += ", ";
        out += render_atom(q.atoms[i]);
    }
    return out + ".";
}

namespace {

// Backtracking join over the atoms in order; tuples are visited in the
// instance's sorted order, so the first full binding is lexicographically
// least along the atom sequence. `alive` masks deleted tuples; `on_match`
// returning true stops the search.
bool search_hom(const Instance& db, const ConjunctiveQuery& q, const std::vector<uint8_t>& alive, size_t atom_idx,
                std::map<std::string, std::string>& binding, std::vector<int>& image,
                const std::function<bool()>& on_match) {
    if (atom_idx == q.atoms.size()) return on_match();
    const QueryAtom& a = q.atoms[atom_idx];
    for (size_t i = 0; i < db.tuples.size(); ++i) {
        if (!alive[i]) continue;
        const DbTuple& t = db.tuples[i];
        if (t.relation != a.relation || t.values.size() != a.terms.size()) continue;
        std::vector<std::string> bound_here;
        bool ok = true;
        for (size_t j = 0; j < a.terms.size() && ok; ++j) {
            const QueryTerm& term = a.terms[j];
            if (!term.is_var) {
                ok = term.text == t.values[j];
            } else {
                auto it = binding.find(term.text);
                if (it == binding.end()) {
                    binding.emplace(term.text, t.values[j]);
                    bound_here.push_back(term.text);
                } else {
                    ok = it->second == t.values[j];
                }
            }
        }
        if (ok) {
            image.push_back(static_cast<int>(i));
            if (search_hom(db, q, alive, atom_idx + 1, binding, image, on_match)) return true;
            image.pop_back();
        }
        for (const auto& v : bound_here) binding.erase(v);
    }
    return false;
}

bool query_holds(const Instance& db, const ConjunctiveQuery& q, const std::vector<uint8_t>& alive) {
    std::map<std::string, std::string> binding;
    std::vector<int> image;
    return search_hom(db, q, alive, 0, binding, image, [] { return true; });
}

} // namespace

CqResult eval_cq(const Instance& db, const ConjunctiveQuery& q) {
    CqResult r;
    std::vector<uint8_t> alive(db.tuples.size(), 1);
    std::map<std::string, std::string> binding;
    std::vector<int> image;
    r.holds = search_hom(db, q, alive, 0, binding, image, [&] {
        r.witness = binding;
        return true;
    });
    return r;
}

std::vector<TupleCauseReport> causes(const Instance& db, const ConjunctiveQuery& q, int cap) {
    std::vector<uint8_t> all_alive(db.tuples.size(), 1);
    if (!query_holds(db, q, all_alive))
        throw PreconditionError("causes: the query does not hold on the instance");

    std::vector<int> endo = db.endogenous_indices();
    int m = static_cast<int>(endo.size());
    if (m > cap)
        throw CapExceededError("causes: " + std::to_string(m) + " endogenous tuples exceed cap " +
                               std::to_string(cap));

    // memoized query evaluation keyed by the deleted-endogenous bitmask
    std::map<uint64_t, bool> memo;
    auto holds_without = [&](uint64_t deleted) {
        auto it = memo.find(deleted);
        if (it != memo.end()) return it->second;
        std::vector<uint8_t> alive(db.tuples.size(), 1);
        for (int i = 0; i < m; ++i)
            if (deleted & (uint64_t{1} << i)) alive[static_cast<size_t>(endo[static_cast<size_t>(i)])] = 0;
        bool h = query_holds(db, q, alive);
        memo.emplace(deleted, h);
        return h;
    };

    std::vector<TupleCauseReport> out;
    for (int ti = 0; ti < m; ++ti) {
        TupleCauseReport rep;
        rep.tuple = db.tuples[static_cast<size_t>(endo[static_cast<size_t>(ti)])];
        rep.responsibility = 0;

        std::vector<int> others;
        for (int i = 0; i < m; ++i)
            if (i != ti) others.push_back(i);

        bool settled = false;
        for (int k = 0; k <= static_cast<int>(others.size()) && !settled; ++k) {
            // all minimum contingencies at this cardinality, lexicographic
            std::vector<int> idx(static_cast<size_t>(k));
            for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
            bool more = true;
            while (more) {
                uint64_t gamma = 0;
                for (int i : idx) gamma |= uint64_t{1} << others[static_cast<size_t>(i)];
                if (holds_without(gamma) && !holds_without(gamma | (uint64_t{1} << ti))) {
                    std::vector<DbTuple> contingency;
                    for (int i : idx)
                        contingency.push_back(
                            db.tuples[static_cast<size_t>(endo[static_cast<size_t>(others[static_cast<size_t>(i)])])]);
                    rep.min_contingencies.push_back(std::move(contingency));
                    settled = true;
                }
                int pos = k - 1;
                while (pos >= 0) {
                    ++idx[static_cast<size_t>(pos)];
                    if (idx[static_cast<size_t>(pos)] <= static_cast<int>(others.size()) - (k - pos)) {
                        for (int j = pos + 1; j < k; ++j)
                            idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
                        break;
                    }
                    --pos;
                }
                if (pos < 0) more = false;
            }
            if (settled) {
                rep.kind = k == 0 ? TupleCauseReport::Kind::Counterfactual : TupleCauseReport::Kind::Actual;
                rep.responsibility = Rational(1, 1 + k);
            }
        }
        out.push_back(std::move(rep));
    }
    return out;
}

std::string DenialConstraint::text() const {
    // forall-free rendering of the forbidden pattern
    std::set<std::string> vars;
    for (const auto& a : body.atoms)
        for (const auto& t : a.terms)
            if (t.is_var) vars.insert(t.text);
    std::string out = "!exists";
    if (!vars.empty()) {
        out += " ";
        bool first = true;
        for (const auto& v : vars) {
            if (!first) out += ",";
            out += v;
            first = false;
        }
    }
    out += " (";
    for (size_t i = 0; i < body.atoms.size(); ++i) {
        if (i) out += " & ";
        out += render_atom(body.atoms[i]);
    }
    return out + ")";
}

bool DenialConstraint::violated(const Instance& db) const { return eval_cq(db, body).holds; }

DenialConstraint cq_to_denial(const ConjunctiveQuery& q) { return DenialConstraint{q}; }

std::string ab_atom_name(const DbTuple& t) {
    std::string out = "Ab_" + t.relation;
    for (const auto& v : t.values) out += "_" + v;
    return out;
}

CbdEncoding cbd_encoding(const Instance& db, const ConjunctiveQuery& q) {
    CbdEncoding enc;
    for (int i : db.endogenous_indices()) {
        enc.component_tuples.push_back(db.tuples[static_cast<size_t>(i)]);
        enc.problem.components.push_back(ab_atom_name(db.tuples[static_cast<size_t>(i)]));
    }

    // distinct homomorphism images as sorted tuple-index sets
    std::set<std::vector<int>> images;
    std::vector<uint8_t> alive(db.tuples.size(), 1);
    std::map<std::string, std::string> binding;
    std::vector<int> image;
    search_hom(db, q, alive, 0, binding, image, [&] {
        std::vector<int> key = image;
        std::sort(key.begin(), key.end());
        key.erase(std::unique(key.begin(), key.end()), key.end());
        images.insert(std::move(key));
        return false; // keep enumerating
    });

    // one positive clause per image: some endogenous member must be abnormal
    for (const auto& img : images) {
        std::vector<FormulaPtr> lits;
        for (int i : img)
            if (!db.exogenous[static_cast<size_t>(i)]) lits.push_back(f_atom(ab_atom_name(db.tuples[static_cast<size_t>(i)])));
        enc.problem.model.push_back(lits.empty() ? f_false() : f_disj(lits));
    }
    return enc;
}

} // namespace xscore
