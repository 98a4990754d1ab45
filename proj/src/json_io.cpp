#include "xscore/json_io.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "xscore/errors.hpp"

namespace xscore {

OrderedJson read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return OrderedJson::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

OrderedJson parse_json_text(const std::string& text, const std::string& what) {
    try {
        return OrderedJson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
}

namespace {

const OrderedJson& field(const OrderedJson& j, const char* key, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string(ctx) + ": missing field '" + key + "'");
    return *it;
}

std::string string_field(const OrderedJson& j, const char* key, const char* ctx) {
    const auto& f = field(j, key, ctx);
    if (!f.is_string()) throw ParseError(std::string(ctx) + ": field '" + key + "' must be a string");
    return f.get<std::string>();
}

} // namespace

Circuit circuit_from_json(const OrderedJson& j) {
    if (!j.is_object()) throw ParseError("circuit: expected an object");
    const auto& gates = field(j, "gates", "circuit");
    if (!gates.is_array()) throw ParseError("circuit: 'gates' must be an array");

    Circuit c;
    std::map<long long, GateId> dense; // file id -> gate index
    auto resolve = [&](const OrderedJson& in) {
        if (!in.is_number_integer()) throw ParseError("circuit: gate inputs must be integer ids");
        auto it = dense.find(in.get<long long>());
        if (it == dense.end())
            throw ParseError("circuit: input id " + in.dump() + " does not refer to an earlier gate");
        return it->second;
    };

    for (const auto& g : gates) {
        if (!g.is_object()) throw ParseError("circuit: each gate must be an object");
        long long id = field(g, "id", "circuit gate").get<long long>();
        if (dense.count(id)) throw ParseError("circuit: duplicate gate id " + std::to_string(id));
        std::string kind = string_field(g, "kind", "circuit gate");
        GateId gid;
        if (kind == "var") {
            gid = c.add_var(c.intern_feature(string_field(g, "feature", "var gate")));
        } else if (kind == "const") {
            const auto& v = field(g, "value", "const gate");
            bool b;
            if (v.is_boolean())
                b = v.get<bool>();
            else if (v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1))
                b = v.get<int>() == 1;
            else
                throw ParseError("const gate: 'value' must be 0 or 1");
            gid = c.add_const(b);
        } else if (kind == "not" || kind == "and" || kind == "or") {
            const auto& ins = field(g, "inputs", "gate");
            if (!ins.is_array() || ins.empty()) throw ParseError("gate: 'inputs' must be a non-empty array");
            std::vector<GateId> resolved;
            for (const auto& in : ins) resolved.push_back(resolve(in));
            if (kind == "not") {
                if (resolved.size() != 1) throw ParseError("not gate: exactly one input");
                gid = c.add_not(resolved[0]);
            } else if (kind == "and") {
                gid = c.add_and(std::move(resolved));
            } else {
                gid = c.add_or(std::move(resolved));
            }
        } else {
            throw ParseError("circuit: unknown gate kind '" + kind + "'");
        }
        dense.emplace(id, gid);
    }

    const auto& out = field(j, "output", "circuit");
    if (!out.is_number_integer()) throw ParseError("circuit: 'output' must be a gate id");
    auto it = dense.find(out.get<long long>());
    if (it == dense.end()) throw ParseError("circuit: output id refers to no gate");
    c.set_output(it->second);
    return c;
}

Json circuit_to_json(const Circuit& c) {
    Json gates = Json::array();
    for (GateId id = 0; id < c.num_gates(); ++id) {
        const Gate& g = c.gate(id);
        Json jg;
        jg["id"] = id;
        switch (g.kind) {
        case GateKind::Var:
            jg["kind"] = "var";
            jg["feature"] = c.feature_name(g.feature);
            break;
        case GateKind::Const:
            jg["kind"] = "const";
            jg["value"] = g.value ? 1 : 0;
            break;
        case GateKind::Not:
            jg["kind"] = "not";
            jg["inputs"] = g.inputs;
            break;
        case GateKind::And:
            jg["kind"] = "and";
            jg["inputs"] = g.inputs;
            break;
        case GateKind::Or:
            jg["kind"] = "or";
            jg["inputs"] = g.inputs;
            break;
        }
        gates.push_back(std::move(jg));
    }
    Json out;
    out["gates"] = std::move(gates);
    out["output"] = c.output();
    return out;
}

Schema schema_from_json(const OrderedJson& j) {
    if (!j.is_object()) throw ParseError("schema: expected an object of feature -> domain");
    Schema s;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_array() || it.value().empty())
            throw ParseError("schema: domain of '" + it.key() + "' must be a non-empty array");
        std::vector<std::string> dom;
        for (const auto& v : it.value()) {
            if (!v.is_string()) throw ParseError("schema: domain values must be strings");
            dom.push_back(v.get<std::string>());
        }
        for (size_t a = 0; a < dom.size(); ++a)
            for (size_t b = a + 1; b < dom.size(); ++b)
                if (dom[a] == dom[b])
                    throw ParseError("schema: duplicate value '" + dom[a] + "' for '" + it.key() + "'");
        if (s.index_of(it.key()) >= 0) throw ParseError("schema: duplicate feature '" + it.key() + "'");
        s.names.push_back(it.key());
        s.domains.push_back(std::move(dom));
    }
    if (s.names.empty()) throw ParseError("schema: no features");
    return s;
}

DecisionTree dt_from_json(const OrderedJson& j) {
    if (!j.is_object()) throw ParseError("decision tree: expected an object");
    DecisionTree dt;
    dt.schema = schema_from_json(field(j, "schema", "decision tree"));

    const auto& nodes = field(j, "nodes", "decision tree");
    if (!nodes.is_array() || nodes.empty()) throw ParseError("decision tree: 'nodes' must be a non-empty array");

    std::map<long long, int> dense;
    std::vector<long long> file_ids;
    for (const auto& nj : nodes) {
        long long id = field(nj, "id", "node").get<long long>();
        if (dense.count(id)) throw ParseError("decision tree: duplicate node id " + std::to_string(id));
        dense.emplace(id, static_cast<int>(file_ids.size()));
        file_ids.push_back(id);
    }

    std::vector<std::vector<long long>> pending_branches(file_ids.size());
    for (const auto& nj : nodes) {
        long long id = field(nj, "id", "node").get<long long>();
        DtNode n;
        if (nj.contains("leaf")) {
            if (nj.contains("feature") || nj.contains("branches"))
                throw ParseError("decision tree: node " + std::to_string(id) + " is both leaf and internal");
            const auto& lv = nj["leaf"];
            bool b;
            if (lv.is_boolean())
                b = lv.get<bool>();
            else if (lv.is_number_integer() && (lv.get<int>() == 0 || lv.get<int>() == 1))
                b = lv.get<int>() == 1;
            else
                throw ParseError("decision tree: leaf label must be 0 or 1");
            n.leaf = true;
            n.label = b;
        } else {
            std::string fname = string_field(nj, "feature", "node");
            int f = dt.schema.index_of(fname);
            if (f < 0) throw ParseError("decision tree: node tests unknown feature '" + fname + "'");
            n.feature = f;
            const auto& br = field(nj, "branches", "node");
            if (!br.is_object()) throw ParseError("decision tree: 'branches' must map values to node ids");
            const auto& dom = dt.schema.domains[static_cast<size_t>(f)];
            if (br.size() != dom.size())
                throw ParseError("decision tree: branches of node " + std::to_string(id) +
                                 " do not cover the domain of '" + fname + "' exactly");
            auto& targets = pending_branches[static_cast<size_t>(dense[id])];
            for (const auto& v : dom) {
                auto bit = br.find(v);
                if (bit == br.end())
                    throw ParseError("decision tree: node " + std::to_string(id) + " misses branch for value '" +
                                     v + "'");
                if (!bit->is_number_integer())
                    throw ParseError("decision tree: branch targets must be node ids");
                targets.push_back(bit->get<long long>());
            }
        }
        dt.nodes.push_back(std::move(n));
    }

    for (size_t i = 0; i < dt.nodes.size(); ++i) {
        if (dt.nodes[i].leaf) continue;
        for (long long t : pending_branches[i]) {
            auto it = dense.find(t);
            if (it == dense.end())
                throw ParseError("decision tree: branch target " + std::to_string(t) + " does not exist");
            dt.nodes[i].branches.push_back(it->second);
        }
    }

    const auto& root = field(j, "root", "decision tree");
    if (!root.is_number_integer()) throw ParseError("decision tree: 'root' must be a node id");
    auto rit = dense.find(root.get<long long>());
    if (rit == dense.end()) throw ParseError("decision tree: root refers to no node");
    dt.root = rit->second;

    // reject cycles reachable from the root
    std::vector<int> color(dt.nodes.size(), 0);
    std::function<void(int)> dfs = [&](int n) {
        if (color[static_cast<size_t>(n)] == 1) throw ParseError("decision tree: cycle detected");
        if (color[static_cast<size_t>(n)] == 2) return;
        color[static_cast<size_t>(n)] = 1;
        if (!dt.nodes[static_cast<size_t>(n)].leaf)
            for (int ch : dt.nodes[static_cast<size_t>(n)].branches) dfs(ch);
        color[static_cast<size_t>(n)] = 2;
    };
    dfs(dt.root);
    return dt;
}

Classifier classifier_from_json(const OrderedJson& j) {
    if (!j.is_object()) throw ParseError("classifier: expected an object");
    if (j.contains("gates")) return Classifier::from_circuit(circuit_from_json(j));
    if (j.contains("nodes")) return Classifier::from_tree(dt_from_json(j));
    if (j.contains("table")) {
        Schema s = schema_from_json(field(j, "schema", "table classifier"));
        const auto& rows = field(j, "table", "table classifier");
        if (!rows.is_array()) throw ParseError("table classifier: 'table' must be an array of rows");
        size_t pop = 1;
        for (const auto& dom : s.domains) pop *= dom.size();
        std::vector<uint8_t> labels(pop, 0), seen(pop, 0);
        for (const auto& row : rows) {
            EntityValues e = entity_from_json(field(row, "values", "table row"), s);
            size_t idx = 0;
            for (size_t f = 0; f < e.size(); ++f)
                idx = idx * s.domains[f].size() + static_cast<size_t>(e[f]);
            if (seen[idx]) throw ParseError("table classifier: duplicate row for one entity");
            seen[idx] = 1;
            const auto& lv = field(row, "label", "table row");
            int lab;
            if (lv.is_boolean())
                lab = lv.get<bool>() ? 1 : 0;
            else if (lv.is_number_integer() && (lv.get<int>() == 0 || lv.get<int>() == 1))
                lab = lv.get<int>();
            else
                throw ParseError("table classifier: label must be 0 or 1");
            labels[idx] = static_cast<uint8_t>(lab);
        }
        for (size_t i = 0; i < pop; ++i)
            if (!seen[i]) throw ParseError("table classifier: table does not cover the whole population");
        return Classifier::from_table(std::move(s), std::move(labels));
    }
    throw ParseError("classifier: expected 'gates' (circuit), 'nodes' (decision tree) or 'table'");
}

EntityValues entity_from_json(const OrderedJson& entity_obj, const Schema& s) {
    if (!entity_obj.is_object()) throw ParseError("entity: expected an object of feature -> value");
    EntityValues e(static_cast<size_t>(s.size()), -1);
    for (auto it = entity_obj.begin(); it != entity_obj.end(); ++it) {
        int f = s.index_of(it.key());
        if (f < 0) throw ParseError("entity: unknown feature '" + it.key() + "'");
        if (!it.value().is_string()) throw ParseError("entity: values must be strings");
        int v = s.value_index(f, it.value().get<std::string>());
        if (v < 0)
            throw ParseError("entity: value '" + it.value().get<std::string>() + "' not in the domain of '" +
                             it.key() + "'");
        e[static_cast<size_t>(f)] = v;
    }
    for (int f = 0; f < s.size(); ++f)
        if (e[static_cast<size_t>(f)] < 0)
            throw ParseError("entity: missing value for feature '" + s.names[static_cast<size_t>(f)] + "'");
    return e;
}

Distribution distribution_from_json(const OrderedJson& j, const Schema& s) {
    if (!j.is_object()) throw ParseError("distribution: expected an object");
    std::string kind = string_field(j, "kind", "distribution");
    if (kind == "uniform") return Distribution::uniform();
    if (kind == "product") {
        const auto& m = field(j, "marginals", "product distribution");
        if (!m.is_object()) throw ParseError("product distribution: 'marginals' must be an object");
        std::vector<std::vector<Rational>> rows(static_cast<size_t>(s.size()));
        for (int f = 0; f < s.size(); ++f) {
            auto it = m.find(s.names[static_cast<size_t>(f)]);
            if (it == m.end())
                throw ParseError("product distribution: missing marginals for '" + s.names[static_cast<size_t>(f)] +
                                 "'");
            const auto& dom = s.domains[static_cast<size_t>(f)];
            auto& row = rows[static_cast<size_t>(f)];
            for (const auto& v : dom) {
                auto pit = it->find(v);
                if (pit == it->end())
                    throw ParseError("product distribution: missing probability for " +
                                     s.names[static_cast<size_t>(f)] + "='" + v + "'");
                if (!pit->is_string()) throw ParseError("product distribution: probabilities must be 'p/q' strings");
                row.push_back(rational_from_string(pit->get<std::string>()));
            }
        }
        return Distribution::product(std::move(rows));
    }
    if (kind == "empirical") {
        const auto& rows = field(j, "sample", "empirical distribution");
        if (!rows.is_array() || rows.empty())
            throw ParseError("empirical distribution: 'sample' must be a non-empty array");
        std::vector<EntityValues> sample;
        std::vector<Rational> weights;
        for (const auto& row : rows) {
            sample.push_back(entity_from_json(field(row, "values", "sample row"), s));
            if (row.contains("weight")) {
                const auto& w = field(row, "weight", "sample row");
                if (!w.is_string()) throw ParseError("empirical distribution: weights must be 'p/q' strings");
                weights.push_back(rational_from_string(w.get<std::string>()));
            } else {
                weights.push_back(Rational(1));
            }
        }
        return Distribution::empirical(std::move(sample), std::move(weights));
    }
    throw ParseError("distribution: unknown kind '" + kind + "'");
}

Instance instance_from_json(const OrderedJson& j) {
    if (!j.is_object()) throw ParseError("instance: expected an object");
    const auto& rels = field(j, "relations", "instance");
    if (!rels.is_object()) throw ParseError("instance: 'relations' must map names to tuple arrays");
    std::vector<DbTuple> tuples;
    for (auto it = rels.begin(); it != rels.end(); ++it) {
        if (!it.value().is_array()) throw ParseError("instance: relation '" + it.key() + "' must be an array");
        for (const auto& tj : it.value()) {
            if (!tj.is_array()) throw ParseError("instance: tuples must be arrays of strings");
            DbTuple t;
            t.relation = it.key();
            for (const auto& v : tj) {
                if (!v.is_string()) throw ParseError("instance: tuple values must be strings");
                t.values.push_back(v.get<std::string>());
            }
            tuples.push_back(std::move(t));
        }
    }
    std::vector<DbTuple> exo;
    if (j.contains("exogenous")) {
        const auto& ej = j["exogenous"];
        if (!ej.is_array()) throw ParseError("instance: 'exogenous' must be an array");
        for (const auto& item : ej) {
            if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_array())
                throw ParseError("instance: exogenous entries must be [relation, [values...]]");
            DbTuple t;
            t.relation = item[0].get<std::string>();
            for (const auto& v : item[1]) {
                if (!v.is_string()) throw ParseError("instance: tuple values must be strings");
                t.values.push_back(v.get<std::string>());
            }
            exo.push_back(std::move(t));
        }
    }
    return Instance::make(std::move(tuples), exo);
}

namespace {
std::vector<FormulaPtr> formula_list(const OrderedJson& j, const char* ctx) {
    if (!j.is_array()) throw ParseError(std::string(ctx) + ": expected an array of formula strings");
    std::vector<FormulaPtr> out;
    for (const auto& f : j) {
        if (!f.is_string()) throw ParseError(std::string(ctx) + ": formulas must be strings");
        out.push_back(parse_formula(f.get<std::string>()));
    }
    return out;
}
} // namespace

DiagnosisProblem diagnosis_problem_from_json(const OrderedJson& j) {
    DiagnosisProblem p;
    p.model = formula_list(field(j, "model", "diagnosis problem"), "model");
    const auto& comps = field(j, "components", "diagnosis problem");
    if (!comps.is_array() || comps.empty())
        throw ParseError("diagnosis problem: 'components' must be a non-empty array");
    for (const auto& c : comps) {
        if (!c.is_string()) throw ParseError("diagnosis problem: components must be atom names");
        p.components.push_back(c.get<std::string>());
    }
    p.observation = formula_list(field(j, "observation", "diagnosis problem"), "observation");
    return p;
}

AbductionProblem abduction_problem_from_json(const OrderedJson& j) {
    AbductionProblem p;
    p.theory = formula_list(field(j, "theory", "abduction problem"), "theory");
    const auto& hyps = field(j, "hypotheses", "abduction problem");
    if (!hyps.is_array() || hyps.empty())
        throw ParseError("abduction problem: 'hypotheses' must be a non-empty array");
    for (const auto& h : hyps) {
        if (!h.is_string()) throw ParseError("abduction problem: hypotheses must be atom names");
        p.hypotheses.push_back(h.get<std::string>());
    }
    p.observation = formula_list(field(j, "observation", "abduction problem"), "observation");
    return p;
}

namespace {
Json witness_to_json(const ContingencyWitness& w, const Schema& s) {
    Json feats;
    for (size_t i = 0; i < w.features.size(); ++i) {
        int f = w.features[i];
        feats[s.names[static_cast<size_t>(f)]] =
            s.domains[static_cast<size_t>(f)][static_cast<size_t>(w.values[i])];
    }
    Json out;
    out["contingency"] = feats.is_null() ? Json::object() : feats;
    return out;
}
} // namespace

Json score_report_to_json(const ScoreReport& r, const Schema& s, bool approx) {
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json je;
        je["feature"] = e.feature;
        je["score"] = to_fraction_string(e.score);
        if (approx) je["approx"] = approx_decimal(e.score);
        if (e.witness) je["witness"] = witness_to_json(*e.witness, s);
        entries.push_back(std::move(je));
    }
    Json out;
    out["method"] = r.method;
    out["distribution"] = r.distribution;
    out["scores"] = std::move(entries);
    out["total"] = to_fraction_string(r.total());
    if (approx) out["total_approx"] = approx_decimal(r.total());
    return out;
}

namespace {
std::string csv_escape(const std::string& s) {
    bool needs = s.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    return out + "\"";
}
} // namespace

std::string score_report_to_csv(const ScoreReport& r, const Schema& s, bool approx) {
    std::string out = "feature,score";
    if (approx) out += ",approx";
    out += ",witness\n";
    for (const auto& e : r.entries) {
        out += csv_escape(e.feature) + "," + to_fraction_string(e.score);
        if (approx) out += "," + approx_decimal(e.score);
        std::string w;
        if (e.witness) {
            for (size_t i = 0; i < e.witness->features.size(); ++i) {
                if (i) w += ";";
                int f = e.witness->features[i];
                w += s.names[static_cast<size_t>(f)] + "=" +
                     s.domains[static_cast<size_t>(f)][static_cast<size_t>(e.witness->values[i])];
            }
        }
        out += "," + csv_escape(w) + "\n";
    }
    return out;
}

Json causes_to_json(const std::vector<TupleCauseReport>& reports, bool approx) {
    Json arr = Json::array();
    for (const auto& rep : reports) {
        Json jr;
        jr["relation"] = rep.tuple.relation;
        jr["tuple"] = rep.tuple.values;
        switch (rep.kind) {
        case TupleCauseReport::Kind::Counterfactual: jr["verdict"] = "counterfactual"; break;
        case TupleCauseReport::Kind::Actual: jr["verdict"] = "actual"; break;
        case TupleCauseReport::Kind::NotACause: jr["verdict"] = "not-a-cause"; break;
        }
        jr["responsibility"] = to_fraction_string(rep.responsibility);
        if (approx) jr["responsibility_approx"] = approx_decimal(rep.responsibility);
        Json cont = Json::array();
        for (const auto& gamma : rep.min_contingencies) {
            Json set = Json::array();
            for (const auto& t : gamma) {
                Json jt;
                jt["relation"] = t.relation;
                jt["tuple"] = t.values;
                set.push_back(std::move(jt));
            }
            cont.push_back(std::move(set));
        }
        jr["min_contingencies"] = std::move(cont);
        arr.push_back(std::move(jr));
    }
    Json out;
    out["causes"] = std::move(arr);
    return out;
}

Json diagnoses_to_json(const std::vector<Diagnosis>& ds, const std::vector<std::string>& components) {
    Json arr = Json::array();
    for (const auto& d : ds) {
        Json jd;
        Json names = Json::array();
        for (int i : d.abnormal) names.push_back(components[static_cast<size_t>(i)]);
        jd["abnormal"] = std::move(names);
        jd["minimal"] = d.minimal;
        jd["minimum"] = d.minimum;
        arr.push_back(std::move(jd));
    }
    Json out;
    out["diagnoses"] = std::move(arr);
    return out;
}

Json abduction_to_json(const AbductionResult& r, const std::vector<std::string>& hypotheses) {
    Json arr = Json::array();
    for (const auto& h : r.explanations) {
        Json names = Json::array();
        for (int i : h) names.push_back(hypotheses[static_cast<size_t>(i)]);
        arr.push_back(std::move(names));
    }
    Json out;
    out["explanations"] = std::move(arr);
    out["entailed_without_hypotheses"] = r.entailed_without_hypotheses;
    return out;
}

} // namespace xscore
