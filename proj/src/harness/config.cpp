#include "catlearn/harness/config.hpp"

#include <fstream>
#include <limits>

#include "catlearn/knowledge/document.hpp"

namespace catlearn::harness {

using nlohmann::json;

namespace {

const json* optionalField(const json& doc, const char* key) {
    auto it = doc.find(key);
    return it == doc.end() ? nullptr : &*it;
}

std::string stringField(const json& v, const char* key) {
    if (!v.is_string()) throw kn::ConfigError(std::string(key) + " must be a string");
    return v.get<std::string>();
}

std::uint64_t unsignedField(const json& v, const char* key) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw kn::ConfigError(std::string(key) + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

} // namespace

ScenarioConfig scenarioConfigFromJson(const json& doc) {
    if (!doc.is_object()) throw kn::ConfigError("scenario config must be a JSON object");
    ScenarioConfig c;
    if (auto* v = optionalField(doc, "scenario")) {
        const auto name = stringField(*v, "scenario");
        if (name == "example") c.scenario = ScenarioKind::Example;
        else if (name == "wcst") c.scenario = ScenarioKind::Wcst;
        else throw kn::ConfigError("unknown scenario '" + name + "'");
    }
    if (auto* v = optionalField(doc, "variant")) {
        const auto name = stringField(*v, "variant");
        auto parsed = sc::parseVariant(name);
        if (!parsed) throw kn::ConfigError("unknown variant '" + name + "'");
        c.run.variant = *parsed;
    }
    if (auto* v = optionalField(doc, "order")) {
        const auto name = stringField(*v, "order");
        auto parsed = sc::parseOrderPolicy(name);
        if (!parsed) throw kn::ConfigError("unknown presentation order '" + name + "'");
        c.run.order = *parsed;
    }
    if (auto* v = optionalField(doc, "seed")) {
        c.run.seed = unsignedField(*v, "seed");
        c.wcst.seed = c.run.seed;
    }
    if (auto* v = optionalField(doc, "maxSteps")) {
        const auto n = unsignedField(*v, "maxSteps");
        if (n > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
            throw kn::ConfigError("maxSteps is too large");
        }
        c.run.maxSteps = static_cast<int>(n);
        c.wcst.cap = n;
    }
    if (auto* v = optionalField(doc, "parameters")) {
        const auto& base = c.scenario == ScenarioKind::Wcst ? c.wcst.params : c.run.params;
        kn::Parameters p;
        try {
            p = kn::parametersFromJson(*v, "", base);
        } catch (const kn::ParseError& e) {
            throw kn::ConfigError("parameters" + e.location() + ": " + e.what());
        }
        c.run.params = p;
        c.wcst.params = p;
    }
    c.run.validate();
    c.wcst.validate();
    return c;
}

ScenarioConfig loadScenarioConfig(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw kn::ConfigError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw kn::ConfigError("config " + path.string() + " at byte " + std::to_string(e.byte) + ": not valid JSON");
    }
    return scenarioConfigFromJson(doc);
}

json toJson(const ScenarioConfig& c) {
    const bool wcst = c.scenario == ScenarioKind::Wcst;
    json doc;
    doc["scenario"] = wcst ? "wcst" : "example";
    doc["variant"] = std::string(sc::toString(c.run.variant));
    doc["order"] = std::string(sc::toString(c.run.order));
    doc["seed"] = wcst ? c.wcst.seed : c.run.seed;
    doc["maxSteps"] = wcst ? c.wcst.cap : static_cast<std::uint64_t>(c.run.maxSteps);
    doc["parameters"] = kn::toJson(wcst ? c.wcst.params : c.run.params);
    return doc;
}

} // namespace catlearn::harness
