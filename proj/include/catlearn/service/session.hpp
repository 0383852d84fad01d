#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "catlearn/knowledge/document.hpp"
#include "catlearn/knowledge/graph.hpp"

namespace catlearn::service {

namespace kn = catlearn::knowledge;

/// Maps onto an HTTP status and an error body {code, message}.
class ServiceError : public std::runtime_error {
public:
    ServiceError(int status, std::string code, const std::string& message)
        : std::runtime_error(message), status_(status), code_(std::move(code)) {}

    int status() const { return status_; }
    const std::string& code() const { return code_; }

private:
    int status_;
    std::string code_;
};

ServiceError badRequest(const std::string& code, const std::string& message);
ServiceError notFound(const std::string& message);
ServiceError conflict(const std::string& message);

/// Built-in scenario a session can be bound to. A bound session accepts
/// object or card names in place of raw feature values.
enum class ScenarioBinding { None, Example, Wcst };

struct SessionSpec {
    kn::FeatureSchema schema;
    std::vector<std::string> actions;
    kn::Parameters params;
    std::uint64_t seed = 1;
    ScenarioBinding binding = ScenarioBinding::None;
};

/// Reads a create request. Fields: scenario ("example" | "wcst"), featureSchema,
/// actions, parameters, seed. A scenario supplies the schema and actions that
/// are not given explicitly; an empty body binds the example scenario.
SessionSpec sessionSpecFromJson(const nlohmann::json& body);

struct PendingInteraction {
    std::string perceptId;
    kn::Observation observation;
    kn::ActionChoice choice;
};

/// One teaching session. Every public member locks the session, so callers
/// never see a half-applied interaction.
class Session {
public:
    Session(std::string id, SessionSpec spec);

    const std::string& id() const { return id_; }

    /// observe + selectAction; the interaction stays pending until rewarded.
    nlohmann::json present(const nlohmann::json& body);
    /// recordReward for the pending interaction.
    nlohmann::json reward(const nlohmann::json& body);
    nlohmann::json inspect() const;

    /// Events with step > since, waiting up to `wait` for one to arrive.
    std::vector<std::string> eventsSince(std::uint64_t since, std::chrono::milliseconds wait) const;

    nlohmann::json document() const;
    /// Replaces the graph. Clears the pending interaction and the history.
    void load(kn::KnowledgeGraph g);

private:
    kn::Percept perceptFromRequest(const nlohmann::json& body, std::string& perceptId) const;

    std::string id_;
    ScenarioBinding binding_;
    kn::KnowledgeGraph graph_;
    std::optional<PendingInteraction> pending_;
    std::vector<kn::EventRecord> history_;
    std::vector<std::string> lines_;
    mutable std::mutex mutex_;
    mutable std::condition_variable newEvent_;
};

/// Session registry. Sessions are independent; the registry lock is only
/// held while looking one up.
class SessionManager {
public:
    /// `storage` enables save/load by file name; without it save returns the
    /// document inline and load only accepts an inline document.
    explicit SessionManager(std::optional<std::filesystem::path> storage = std::nullopt);

    std::string create(const nlohmann::json& body);
    std::shared_ptr<Session> get(const std::string& id) const;
    std::size_t size() const;

    nlohmann::json save(const std::string& id, const nlohmann::json& body) const;
    nlohmann::json load(const std::string& id, const nlohmann::json& body);

private:
    std::filesystem::path storagePath(const nlohmann::json& body) const;

    std::optional<std::filesystem::path> storage_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t nextId_ = 1;
    mutable std::shared_mutex mutex_;
};

} // namespace catlearn::service
