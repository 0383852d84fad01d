#include "catlearn/service/session.hpp"

#include <fstream>
#include <sstream>

#include "catlearn/scenarios/example.hpp"
#include "catlearn/scenarios/wcst.hpp"

namespace catlearn::service {

namespace sc = catlearn::scenarios;
using nlohmann::json;

ServiceError badRequest(const std::string& code, const std::string& message) {
    return ServiceError(400, code, message);
}

ServiceError notFound(const std::string& message) { return ServiceError(404, "not_found", message); }

ServiceError conflict(const std::string& message) { return ServiceError(409, "conflict", message); }

namespace {

std::string_view toString(ScenarioBinding b) {
    switch (b) {
    case ScenarioBinding::Example: return "example";
    case ScenarioBinding::Wcst: return "wcst";
    case ScenarioBinding::None: break;
    }
    return "none";
}

std::optional<sc::WcstCard> parseCard(std::string_view label) {
    for (auto color : {sc::CardColor::Red, sc::CardColor::Green, sc::CardColor::Yellow,
                       sc::CardColor::Blue}) {
        for (auto form : {sc::CardForm::Triangle, sc::CardForm::Star, sc::CardForm::Cross,
                          sc::CardForm::Circle}) {
            for (int n = 1; n <= 4; ++n) {
                sc::WcstCard card{color, form, n};
                if (card.label() == label) return card;
            }
        }
    }
    return std::nullopt;
}

// Domain errors raised by the core while handling a request body.
template <typename F>
auto validated(const std::string& code, F&& f) {
    try {
        return f();
    } catch (const kn::ParseError& e) {
        throw badRequest(code, e.what());
    } catch (const kn::ConfigError& e) {
        throw badRequest(code, e.what());
    } catch (const kn::ContractViolation& e) {
        throw badRequest(code, e.what());
    } catch (const kn::DegenerateInput& e) {
        throw badRequest(code, e.what());
    }
}

json similaritiesOf(const kn::KnowledgeGraph& g, kn::CategoryId c) {
    json out = json::array();
    for (const auto& [id, other] : g.categories()) {
        if (id == c) continue;
        out.push_back({{"categoryId", kn::raw(id)}, {"similarity", g.similarity(c, id)}});
    }
    return out;
}

json similarityMatrix(const kn::KnowledgeGraph& g) {
    json ids = json::array();
    json rows = json::array();
    for (const auto& [a, ca] : g.categories()) {
        ids.push_back(kn::raw(a));
        json row = json::array();
        for (const auto& [b, cb] : g.categories()) row.push_back(a == b ? json(nullptr) : json(g.similarity(a, b)));
        rows.push_back(std::move(row));
    }
    return {{"categoryIds", ids}, {"values", rows}};
}

} // namespace

SessionSpec sessionSpecFromJson(const json& body) {
    if (!body.is_object()) throw badRequest("invalid_request", "request body must be an object");
    SessionSpec spec;
    const bool hasSchema = body.contains("featureSchema");
    const bool hasActions = body.contains("actions");
    std::string scenario = hasSchema || hasActions ? "" : "example";
    if (body.contains("scenario")) {
        if (!body["scenario"].is_string()) throw badRequest("invalid_request", "scenario must be a string");
        scenario = body["scenario"].get<std::string>();
    }
    if (scenario == "example") {
        spec.binding = ScenarioBinding::Example;
        spec.schema = sc::sortingSchema();
        spec.actions = sc::sortingActions();
    } else if (scenario == "wcst") {
        spec.binding = ScenarioBinding::Wcst;
        spec.schema = sc::wcstSchema();
        spec.actions = sc::wcstActions();
    } else if (!scenario.empty()) {
        throw badRequest("invalid_request", "unknown scenario '" + scenario + "'");
    }
    if (hasSchema) {
        spec.schema = validated("invalid_schema", [&] { return kn::schemaFromJson(body["featureSchema"], "/featureSchema"); });
        if (spec.binding != ScenarioBinding::None && spec.schema != (spec.binding == ScenarioBinding::Example ? sc::sortingSchema() : sc::wcstSchema())) {
            spec.binding = ScenarioBinding::None;
        }
    }
    if (hasActions) {
        const auto& a = body["actions"];
        if (!a.is_array()) throw badRequest("invalid_schema", "actions must be an array of names");
        spec.actions.clear();
        for (const auto& name : a) {
            if (!name.is_string()) throw badRequest("invalid_schema", "actions must be an array of names");
            spec.actions.push_back(name.get<std::string>());
        }
    }
    if (spec.schema.empty()) throw badRequest("invalid_schema", "featureSchema is required without a scenario");
    if (spec.actions.empty()) throw badRequest("invalid_schema", "at least one action is required");
    if (body.contains("parameters")) {
        spec.params = validated("invalid_parameters", [&] { return kn::parametersFromJson(body["parameters"], "/parameters"); });
    }
    if (body.contains("seed")) {
        const auto& s = body["seed"];
        if (!s.is_number_unsigned()) throw badRequest("invalid_request", "seed must be a nonnegative integer");
        spec.seed = s.get<std::uint64_t>();
    }
    return spec;
}

Session::Session(std::string id, SessionSpec spec)
    : id_(std::move(id)),
      binding_(spec.binding),
      graph_(validated("invalid_parameters", [&] {
          return kn::KnowledgeGraph(std::move(spec.schema), std::move(spec.actions), spec.params, spec.seed);
      })) {}

kn::Percept Session::perceptFromRequest(const json& body, std::string& perceptId) const {
    if (!body.is_object()) throw badRequest("invalid_percept", "request body must be an object");
    if (body.contains("perceptId")) {
        if (!body["perceptId"].is_string()) throw badRequest("invalid_percept", "perceptId must be a string");
        perceptId = body["perceptId"].get<std::string>();
    }
    if (body.contains("features")) {
        return validated("invalid_percept", [&] { return kn::perceptFromJson(graph_.schema(), body["features"]); });
    }
    if (binding_ == ScenarioBinding::Example && body.contains("object") && body["object"].is_string()) {
        const auto name = body["object"].get<std::string>();
        const auto kind = sc::parseObjectKind(name);
        if (!kind) throw badRequest("invalid_percept", "unknown object '" + name + "'");
        if (perceptId.empty()) perceptId = name;
        if (body.contains("noiseSeed")) {
            if (!body["noiseSeed"].is_number_unsigned()) throw badRequest("invalid_percept", "noiseSeed must be a nonnegative integer");
            return sc::examplePercept(*kind, sc::Variant::Noisy, body["noiseSeed"].get<std::uint64_t>());
        }
        return sc::examplePercept(*kind, sc::Variant::Exact, 0);
    }
    if (binding_ == ScenarioBinding::Wcst && body.contains("card") && body["card"].is_string()) {
        const auto label = body["card"].get<std::string>();
        const auto card = parseCard(label);
        if (!card) throw badRequest("invalid_percept", "unknown card '" + label + "'");
        if (perceptId.empty()) perceptId = label;
        return sc::wcstPercept(*card);
    }
    throw badRequest("invalid_percept", "percept payload needs a features object");
}

json Session::present(const json& body) {
    std::lock_guard lock(mutex_);
    if (pending_) throw conflict("session " + id_ + " already has a pending interaction");
    std::string perceptId;
    const auto percept = perceptFromRequest(body, perceptId);
    if (perceptId.empty()) perceptId = "p" + std::to_string(history_.size() + 1);
    auto obs = graph_.observe(percept);
    const auto choice = graph_.selectAction(obs.category);
    json out = {
        {"categoryId", kn::raw(obs.category)},
        {"isNew", obs.isNew},
        {"chosenAction", graph_.actionName(choice.action)},
        {"tier", toString(choice.tier)},
        {"borrowedFrom", choice.borrowedFrom ? json(kn::raw(*choice.borrowedFrom)) : json(nullptr)},
        {"percept", kn::toJson(obs.percept)},
        {"perceptId", perceptId},
        {"similarities", similaritiesOf(graph_, obs.category)},
    };
    pending_ = PendingInteraction{perceptId, std::move(obs), choice};
    return out;
}

json Session::reward(const json& body) {
    std::lock_guard lock(mutex_);
    if (!body.is_object() || !body.contains("reward") || !body["reward"].is_string()) {
        throw badRequest("invalid_reward", "reward must be one of positive, neutral, negative");
    }
    const auto reward = kn::parseReward(body["reward"].get<std::string>());
    if (!reward) throw badRequest("invalid_reward", "reward must be one of positive, neutral, negative");
    if (!pending_) throw conflict("session " + id_ + " has no pending interaction");
    const auto outcome = graph_.recordReward(pending_->observation, pending_->choice.action, *reward);
    auto event = kn::makeEvent(history_.size() + 1, pending_->perceptId, pending_->observation,
                               pending_->choice, *reward, outcome, graph_);
    pending_.reset();
    json e = kn::toJson(event, graph_.schema());
    json adaptations = json::array();
    for (const auto& a : outcome.adaptations) {
        adaptations.push_back({{"reason", toString(a.reason)},
                               {"first", kn::raw(a.first)},
                               {"second", kn::raw(a.second)},
                               {"attribute", a.attribute},
                               {"decrement", a.decrement}});
    }
    json out = {
        {"outcome", e["outcome"]},
        {"merges", e["merges"]},
        {"splits", e["splits"]},
        {"adaptations", adaptations},
        {"weightsAfter", e["weightsAfter"]},
        {"categoryCount", graph_.categories().size()},
        {"event", e},
    };
    lines_.push_back(e.dump());
    history_.push_back(std::move(event));
    newEvent_.notify_all();
    return out;
}

json Session::inspect() const {
    std::lock_guard lock(mutex_);
    json history = json::array();
    for (const auto& e : history_) history.push_back(kn::toJson(e, graph_.schema()));
    json pending = nullptr;
    if (pending_) {
        pending = {{"perceptId", pending_->perceptId},
                   {"categoryId", kn::raw(pending_->observation.category)},
                   {"chosenAction", graph_.actionName(pending_->choice.action)}};
    }
    return {
        {"id", id_},
        {"scenario", toString(binding_)},
        {"graph", kn::serializeGraph(graph_)},
        {"similarityMatrix", similarityMatrix(graph_)},
        {"weights", kn::toJson(graph_.weights(), graph_.schema())},
        {"history", history},
        {"pending", pending},
    };
}

std::vector<std::string> Session::eventsSince(std::uint64_t since, std::chrono::milliseconds wait) const {
    std::unique_lock lock(mutex_);
    newEvent_.wait_for(lock, wait, [&] { return lines_.size() > since; });
    if (lines_.size() <= since) return {};
    return {lines_.begin() + static_cast<std::ptrdiff_t>(since), lines_.end()};
}

json Session::document() const {
    std::lock_guard lock(mutex_);
    return kn::serializeGraph(graph_);
}

void Session::load(kn::KnowledgeGraph g) {
    std::lock_guard lock(mutex_);
    if (binding_ != ScenarioBinding::None) {
        const bool same = g.schema() == graph_.schema() && g.actions() == graph_.actions();
        if (!same) binding_ = ScenarioBinding::None;
    }
    graph_ = std::move(g);
    pending_.reset();
    history_.clear();
    lines_.clear();
    newEvent_.notify_all();
}

SessionManager::SessionManager(std::optional<std::filesystem::path> storage)
    : storage_(std::move(storage)) {}

std::string SessionManager::create(const json& body) {
    auto spec = sessionSpecFromJson(body);
    std::unique_lock lock(mutex_);
    const std::string id = "s" + std::to_string(nextId_);
    auto session = std::make_shared<Session>(id, std::move(spec));
    ++nextId_;
    sessions_.emplace(id, std::move(session));
    return id;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const {
    std::shared_lock lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw notFound("no session '" + id + "'");
    return it->second;
}

std::size_t SessionManager::size() const {
    std::shared_lock lock(mutex_);
    return sessions_.size();
}

std::filesystem::path SessionManager::storagePath(const json& body) const {
    const auto& name = body["path"];
    if (!name.is_string()) throw badRequest("invalid_request", "path must be a file name");
    const auto file = name.get<std::string>();
    if (!storage_) throw badRequest("storage_disabled", "the server was started without a storage directory");
    // Plain file names only; nothing may escape the storage directory.
    if (file.empty() || file.find_first_of("/\\") != std::string::npos || file == "." || file == "..") {
        throw badRequest("invalid_request", "path must be a plain file name");
    }
    return *storage_ / file;
}

json SessionManager::save(const std::string& id, const json& body) const {
    const auto session = get(id);
    auto doc = session->document();
    if (body.is_object() && body.contains("path")) {
        const auto path = storagePath(body);
        std::ofstream out(path);
        out << doc.dump(2) << '\n';
        if (!out) throw ServiceError(500, "io_error", "cannot write " + path.string());
        return {{"path", path.filename().string()}};
    }
    return {{"document", std::move(doc)}};
}

json SessionManager::load(const std::string& id, const json& body) {
    const auto session = get(id);
    if (!body.is_object()) throw badRequest("invalid_request", "request body must be an object");
    kn::KnowledgeGraph g = validated("invalid_document", [&] {
        if (body.contains("document")) return kn::deserializeGraph(body["document"]);
        if (!body.contains("path")) throw badRequest("invalid_request", "load needs a document or a path");
        const auto path = storagePath(body);
        if (!std::filesystem::exists(path)) throw notFound("no stored document '" + path.filename().string() + "'");
        return kn::loadGraph(path);
    });
    const auto categories = g.categories().size();
    session->load(std::move(g));
    return {{"loaded", true}, {"categoryCount", categories}};
}

} // namespace catlearn::service
