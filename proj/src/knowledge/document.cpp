#include "catlearn/knowledge/document.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace catlearn::knowledge {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name, const std::string& where) {
    if (!j.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
    auto it = j.find(name);
    if (it == j.end()) throw ParseError(where + "/" + name, "missing field");
    return *it;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError(where, "expected a number");
    return j.get<double>();
}

std::uint64_t unsignedInt(const json& j, const std::string& where) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    throw ParseError(where, "expected a nonnegative integer");
}

std::string string(const json& j, const std::string& where) {
    if (!j.is_string()) throw ParseError(where, "expected a string");
    return j.get<std::string>();
}

const json& array(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where, "expected an array");
    return j;
}

std::string at(const std::string& where, std::size_t i) {
    return where + "/" + std::to_string(i);
}

} // namespace

json toJson(const Parameters& p) {
    return {{"rhoRa", p.rhoRa}, {"deltaAw", p.deltaAw}, {"thetaMc", p.thetaMc},
            {"thetaMf", p.thetaMf}};
}

Parameters parametersFromJson(const json& j, const std::string& where, Parameters base) {
    Parameters p = base;
    if (!j.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
    if (j.contains("rhoRa")) p.rhoRa = number(j["rhoRa"], where + "/rhoRa");
    if (j.contains("deltaAw")) p.deltaAw = number(j["deltaAw"], where + "/deltaAw");
    if (j.contains("thetaMc")) p.thetaMc = number(j["thetaMc"], where + "/thetaMc");
    if (j.contains("thetaMf")) p.thetaMf = number(j["thetaMf"], where + "/thetaMf");
    return p;
}

json toJson(const FeatureSchema& schema) {
    json out = json::array();
    for (const auto& f : schema) out.push_back({{"id", f.id}, {"characteristics", f.characteristics}});
    return out;
}

FeatureSchema schemaFromJson(const json& j, const std::string& where) {
    FeatureSchema schema;
    const auto& arr = array(j, where);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto w = at(where, i);
        FeatureSpec f;
        f.id = string(field(arr[i], "id", w), w + "/id");
        const auto& chars = array(field(arr[i], "characteristics", w), w + "/characteristics");
        for (std::size_t c = 0; c < chars.size(); ++c) {
            f.characteristics.push_back(string(chars[c], at(w + "/characteristics", c)));
        }
        schema.push_back(std::move(f));
    }
    return schema;
}

json toJson(const AttributeWeights& w, const FeatureSchema& schema) {
    json features = json::object();
    for (std::size_t i = 0; i < schema.size(); ++i) features[schema[i].id] = w.features.at(i);
    return {{"features", features}, {"experience", w.experience}};
}

namespace {

AttributeWeights weightsFromJson(const json& j, const FeatureSchema& schema,
                                 const std::string& where) {
    AttributeWeights w;
    const auto& features = field(j, "features", where);
    for (const auto& f : schema) {
        w.features.push_back(number(field(features, f.id.c_str(), where + "/features"),
                                    where + "/features/" + f.id));
    }
    w.experience = number(field(j, "experience", where), where + "/experience");
    return w;
}

json categoryToJson(const ObjectCategory& c, const KnowledgeGraph& g) {
    json features = json::object();
    for (std::size_t f = 0; f < g.schema().size(); ++f) {
        json vectors = json::array();
        for (const auto& v : c.featureSets[f]) {
            json intervals = json::array();
            for (const auto& iv : v.intervals) intervals.push_back({iv.lo, iv.hi});
            vectors.push_back({{"intervals", intervals}, {"count", v.count}});
        }
        features[g.schema()[f].id] = vectors;
    }
    json experiences = json::array();
    for (const auto& [a, r] : c.experiences) {
        experiences.push_back({{"action", g.actionName(a)}, {"reward", toString(r)}});
    }
    return {{"id", raw(c.id)}, {"features", features}, {"experiences", experiences}};
}

ObjectCategory categoryFromJson(const json& j, const FeatureSchema& schema,
                                const std::vector<std::string>& actions,
                                const std::string& where) {
    ObjectCategory c;
    c.id = CategoryId{unsignedInt(field(j, "id", where), where + "/id")};
    const auto& features = field(j, "features", where);
    for (const auto& f : schema) {
        const std::string fw = where + "/features/" + f.id;
        const auto& vectors = array(field(features, f.id.c_str(), where + "/features"), fw);
        std::vector<FeatureIntervalVector> set;
        for (std::size_t v = 0; v < vectors.size(); ++v) {
            const auto vw = at(fw, v);
            FeatureIntervalVector fiv;
            const auto& intervals = array(field(vectors[v], "intervals", vw), vw + "/intervals");
            for (std::size_t i = 0; i < intervals.size(); ++i) {
                const auto iw = at(vw + "/intervals", i);
                const auto& pairJ = array(intervals[i], iw);
                if (pairJ.size() != 2) throw ParseError(iw, "expected [lo, hi]");
                CharacteristicInterval iv{number(pairJ[0], iw + "/0"), number(pairJ[1], iw + "/1")};
                if (iv.lo > iv.hi) throw ParseError(iw, "interval has lo > hi");
                fiv.intervals.push_back(iv);
            }
            if (fiv.arity() != f.arity()) {
                throw ParseError(vw + "/intervals", "interval count does not match feature arity");
            }
            fiv.count = unsignedInt(field(vectors[v], "count", vw), vw + "/count");
            if (fiv.count == 0) throw ParseError(vw + "/count", "count must be positive");
            set.push_back(std::move(fiv));
        }
        if (set.empty()) throw ParseError(fw, "feature has no interval vectors");
        c.featureSets.push_back(std::move(set));
    }
    const auto& exps = array(field(j, "experiences", where), where + "/experiences");
    for (std::size_t e = 0; e < exps.size(); ++e) {
        const auto ew = at(where + "/experiences", e);
        const auto name = string(field(exps[e], "action", ew), ew + "/action");
        const auto rewardText = string(field(exps[e], "reward", ew), ew + "/reward");
        auto reward = parseReward(rewardText);
        if (!reward) throw ParseError(ew + "/reward", "unknown reward '" + rewardText + "'");
        auto it = std::find(actions.begin(), actions.end(), name);
        if (it == actions.end()) throw ParseError(ew + "/action", "unknown action '" + name + "'");
        const auto index = static_cast<ActionIndex>(it - actions.begin());
        if (!c.experiences.emplace(index, *reward).second) {
            throw ParseError(ew, "duplicate experience for action '" + name + "'");
        }
    }
    return c;
}

} // namespace

json serializeGraph(const KnowledgeGraph& g) {
    json categories = json::array();
    for (const auto& [id, c] : g.categories()) categories.push_back(categoryToJson(c, g));
    json sims = json::array();
    for (const auto& [k, ps] : g.similarities()) {
        sims.push_back({{"a", raw(k.first)}, {"b", raw(k.second)},
                        {"attributes", ps.attributes}, {"value", ps.value}});
    }
    return {
        {"version", kDocumentVersion},
        {"parameters", toJson(g.parameters())},
        {"actionSet", g.actions()},
        {"featureSchema", toJson(g.schema())},
        {"weights", toJson(g.weights(), g.schema())},
        {"categories", categories},
        {"similarities", sims},
        {"nextCategoryId", raw(g.nextId())},
        {"rngState", {{"seed", g.rng().seed()}, {"engine", g.rng().state()}}},
    };
}

KnowledgeGraph deserializeGraph(const json& doc) {
    const auto version = unsignedInt(field(doc, "version", ""), "/version");
    if (version != kDocumentVersion) {
        throw ParseError("/version", "unsupported document version " + std::to_string(version));
    }
    KnowledgeGraph::Snapshot s;
    s.params = parametersFromJson(field(doc, "parameters", ""), "/parameters");
    const auto& actions = array(field(doc, "actionSet", ""), "/actionSet");
    for (std::size_t i = 0; i < actions.size(); ++i) {
        s.actions.push_back(string(actions[i], at("/actionSet", i)));
    }
    s.schema = schemaFromJson(field(doc, "featureSchema", ""), "/featureSchema");
    s.weights = weightsFromJson(field(doc, "weights", ""), s.schema, "/weights");
    const auto& cats = array(field(doc, "categories", ""), "/categories");
    for (std::size_t i = 0; i < cats.size(); ++i) {
        s.categories.push_back(categoryFromJson(cats[i], s.schema, s.actions, at("/categories", i)));
    }
    if (doc.contains("similarities")) {
        const auto& sims = array(doc["similarities"], "/similarities");
        for (std::size_t i = 0; i < sims.size(); ++i) {
            const auto w = at("/similarities", i);
            PairSimilarity ps;
            const auto& attrs = array(field(sims[i], "attributes", w), w + "/attributes");
            for (std::size_t a = 0; a < attrs.size(); ++a) {
                ps.attributes.push_back(number(attrs[a], at(w + "/attributes", a)));
            }
            ps.value = number(field(sims[i], "value", w), w + "/value");
            const CategoryId a{unsignedInt(field(sims[i], "a", w), w + "/a")};
            const CategoryId b{unsignedInt(field(sims[i], "b", w), w + "/b")};
            s.similarities[{a, b}] = std::move(ps);
        }
    }
    std::uint64_t maxId = 0;
    for (const auto& c : s.categories) maxId = std::max(maxId, raw(c.id));
    s.nextId = CategoryId{doc.contains("nextCategoryId")
                              ? unsignedInt(doc["nextCategoryId"], "/nextCategoryId")
                              : maxId + 1};
    const auto& rng = field(doc, "rngState", "");
    s.seed = unsignedInt(field(rng, "seed", "/rngState"), "/rngState/seed");
    if (rng.contains("engine")) s.rngState = string(rng["engine"], "/rngState/engine");

    try {
        return KnowledgeGraph::fromSnapshot(std::move(s));
    } catch (const std::invalid_argument& e) {
        throw ParseError("/", e.what());
    } catch (const std::logic_error& e) {
        throw ParseError("/", e.what());
    }
}

KnowledgeGraph deserializeGraph(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), e.what());
    }
    return deserializeGraph(doc);
}

void saveGraph(const KnowledgeGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << serializeGraph(g).dump(2) << '\n';
}

KnowledgeGraph loadGraph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return deserializeGraph(buffer.str());
}

Percept perceptFromJson(const FeatureSchema& schema, const json& features) {
    if (!features.is_object()) throw ParseError("/features", "expected an object");
    std::map<std::string, std::vector<double>> raw;
    for (const auto& [id, values] : features.items()) {
        const auto w = "/features/" + id;
        const auto& arr = array(values, w);
        std::vector<double> v;
        for (std::size_t i = 0; i < arr.size(); ++i) v.push_back(number(arr[i], at(w, i)));
        raw.emplace(id, std::move(v));
    }
    return makePercept(schema, raw);
}

json toJson(const Percept& p) {
    json out = json::object();
    for (const auto& f : p.features) out[f.featureId] = f.values;
    return out;
}

EventRecord makeEvent(std::uint64_t step, std::string perceptId, const Observation& obs,
                      const ActionChoice& choice, Reward reward, const RewardOutcome& outcome,
                      const KnowledgeGraph& g) {
    EventRecord e;
    e.step = step;
    e.perceptId = std::move(perceptId);
    e.category = obs.category;
    e.isNew = obs.isNew;
    e.action = g.actionName(choice.action);
    e.tier = std::string(toString(choice.tier));
    e.reward = reward;
    e.outcome = std::string(toString(outcome.kind));
    e.merges = outcome.merges;
    if (outcome.split) e.splits.push_back(*outcome.split);
    e.weightsAfter = g.weights();
    return e;
}

json toJson(const EventRecord& e, const FeatureSchema& schema) {
    json merges = json::array();
    for (const auto& m : e.merges) {
        merges.push_back({{"kept", raw(m.kept)}, {"absorbed", raw(m.absorbed)},
                          {"similarity", m.similarity}});
    }
    json splits = json::array();
    for (const auto& s : e.splits) {
        splits.push_back({{"from", raw(s.from)}, {"created", raw(s.created)}});
    }
    return {
        {"step", e.step},
        {"perceptId", e.perceptId},
        {"categoryId", raw(e.category)},
        {"isNew", e.isNew},
        {"action", e.action},
        {"tier", e.tier},
        {"reward", toString(e.reward)},
        {"outcome", e.outcome},
        {"merges", merges},
        {"splits", splits},
        {"weightsAfter", toJson(e.weightsAfter, schema)},
    };
}

std::string toLine(const EventRecord& e, const FeatureSchema& schema) {
    return toJson(e, schema).dump();
}

} // namespace catlearn::knowledge
