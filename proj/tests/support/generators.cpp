#include "support/generators.hpp"

#include <functional>
#include <memory>

namespace xtest {

using namespace xscore;

DecisionTree random_binary_tree(Rng& rng, int features, int max_depth) {
    DecisionTree dt;
    for (int f = 0; f < features; ++f) {
        dt.schema.names.push_back("x" + std::to_string(f + 1));
        dt.schema.domains.push_back({"0", "1"});
    }
    std::function<int(std::vector<int>, int)> grow = [&](std::vector<int> avail, int depth) -> int {
        bool stop = avail.empty() || depth >= max_depth ||
                    std::uniform_int_distribution<int>(0, 3)(rng) == 0;
        if (stop) {
            DtNode leaf;
            leaf.leaf = true;
            leaf.label = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
            dt.nodes.push_back(leaf);
            return static_cast<int>(dt.nodes.size()) - 1;
        }
        size_t at = std::uniform_int_distribution<size_t>(0, avail.size() - 1)(rng);
        int f = avail[at];
        avail.erase(avail.begin() + static_cast<long>(at));
        int lo = grow(avail, depth + 1);
        int hi = grow(avail, depth + 1);
        DtNode n;
        n.feature = f;
        n.branches = {lo, hi};
        dt.nodes.push_back(n);
        return static_cast<int>(dt.nodes.size()) - 1;
    };
    std::vector<int> avail;
    for (int f = 0; f < features; ++f) avail.push_back(f);
    dt.root = grow(avail, 0);
    return dt;
}

Schema random_schema(Rng& rng, int max_features, int max_domain) {
    Schema s;
    int n = std::uniform_int_distribution<int>(1, max_features)(rng);
    for (int f = 0; f < n; ++f) {
        s.names.push_back("f" + std::to_string(f + 1));
        int dsz = std::uniform_int_distribution<int>(2, max_domain)(rng);
        std::vector<std::string> dom;
        for (int v = 0; v < dsz; ++v) dom.push_back("v" + std::to_string(v));
        s.domains.push_back(std::move(dom));
    }
    return s;
}

Classifier random_table_classifier(Rng& rng, const Schema& s) {
    size_t pop = 1;
    for (const auto& dom : s.domains) pop *= dom.size();
    std::vector<uint8_t> labels(pop);
    for (auto& l : labels) l = static_cast<uint8_t>(std::uniform_int_distribution<int>(0, 1)(rng));
    return Classifier::from_table(s, std::move(labels));
}

Distribution random_product(Rng& rng, const Schema& s) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& dom : s.domains) {
        std::vector<Rational> row;
        long long total = 0;
        std::vector<long long> raw;
        for (size_t v = 0; v < dom.size(); ++v) {
            long long w = std::uniform_int_distribution<long long>(1, 8)(rng);
            raw.push_back(w);
            total += w;
        }
        for (long long w : raw) row.emplace_back(w, total);
        rows.push_back(std::move(row));
    }
    return Distribution::product(std::move(rows));
}

EntityValues random_entity(Rng& rng, const Schema& s) {
    EntityValues e;
    for (const auto& dom : s.domains)
        e.push_back(std::uniform_int_distribution<int>(0, static_cast<int>(dom.size()) - 1)(rng));
    return e;
}

GameFunction random_game(Rng& rng, int players) {
    auto table = std::make_shared<std::vector<Rational>>();
    size_t n = size_t{1} << players;
    for (size_t i = 0; i < n; ++i) {
        long long num = std::uniform_int_distribution<long long>(-24, 24)(rng);
        long long den = std::uniform_int_distribution<long long>(1, 12)(rng);
        table->emplace_back(num, den);
    }
    return GameFunction(players, [table](uint64_t mask) { return (*table)[mask]; });
}

Instance random_instance(Rng& rng, int max_tuples, bool with_exogenous) {
    const std::vector<std::string> constants = {"a", "b", "c", "d", "e", "f"};
    auto pick = [&] { return constants[std::uniform_int_distribution<size_t>(0, constants.size() - 1)(rng)]; };
    int count = std::uniform_int_distribution<int>(2, max_tuples)(rng);
    std::vector<DbTuple> tuples;
    for (int i = 0; i < count; ++i) {
        int which = std::uniform_int_distribution<int>(0, 3)(rng);
        DbTuple t;
        if (which == 0) {
            t.relation = "S";
            t.values = {pick()};
        } else if (which <= 2) {
            t.relation = "R";
            t.values = {pick(), pick()};
        } else {
            t.relation = "T";
            t.values = {pick(), pick()};
        }
        tuples.push_back(std::move(t));
    }
    std::vector<DbTuple> exo;
    if (with_exogenous) {
        for (const auto& t : tuples)
            if (std::uniform_int_distribution<int>(0, 4)(rng) == 0) exo.push_back(t);
    }
    return Instance::make(std::move(tuples), exo);
}

ConjunctiveQuery random_query(Rng& rng) {
    static const std::vector<std::string> pool = {
        "Q :- S(x), R(x,y), S(y).",
        "Q :- R(x,y), R(y,z).",
        "Q :- R(x,x).",
        "Q :- S(x), R(x,y).",
        "Q :- R(x,y), S(y), T(y,z).",
        "Q :- R('a',x), S(x).",
    };
    return parse_query(pool[std::uniform_int_distribution<size_t>(0, pool.size() - 1)(rng)]);
}

FormulaPtr random_formula(Rng& rng, const std::vector<std::string>& atoms, int depth) {
    int kind = depth <= 0 ? 0 : std::uniform_int_distribution<int>(0, 6)(rng);
    switch (kind) {
    case 0:
    case 1:
        return f_atom(atoms[std::uniform_int_distribution<size_t>(0, atoms.size() - 1)(rng)]);
    case 2:
        return f_not(random_formula(rng, atoms, depth - 1));
    case 3:
        return f_and(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1));
    case 4:
        return f_or(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1));
    case 5:
        return f_implies(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1));
    default:
        return f_iff(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1));
    }
}

} // namespace xtest
