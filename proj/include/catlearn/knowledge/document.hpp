#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "catlearn/knowledge/graph.hpp"

namespace catlearn::knowledge {

inline constexpr int kDocumentVersion = 1;

/// Malformed graph document. `location()` is a byte offset ("byte 17") for
/// syntax errors or a JSON pointer ("/categories/0/features") for schema errors.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string location, const std::string& message)
        : std::runtime_error(location + ": " + message), location_(std::move(location)) {}

    const std::string& location() const { return location_; }

private:
    std::string location_;
};

nlohmann::json toJson(const Parameters& p);
/// Fields absent from `j` keep their value from `base`.
Parameters parametersFromJson(const nlohmann::json& j, const std::string& where = "",
                              Parameters base = {});
nlohmann::json toJson(const AttributeWeights& w, const FeatureSchema& schema);
nlohmann::json toJson(const FeatureSchema& schema);
FeatureSchema schemaFromJson(const nlohmann::json& j, const std::string& where = "");

/// Graph document: {version, parameters, actionSet, featureSchema, weights,
/// categories[], similarities[], nextCategoryId, rngState}. Interval vectors
/// store counts; probabilities are derived on load.
nlohmann::json serializeGraph(const KnowledgeGraph& g);
KnowledgeGraph deserializeGraph(const nlohmann::json& doc);
KnowledgeGraph deserializeGraph(const std::string& text);

void saveGraph(const KnowledgeGraph& g, const std::filesystem::path& path);
KnowledgeGraph loadGraph(const std::filesystem::path& path);

/// Percept payload: {featureId: [values], ...}, normalized per feature.
Percept perceptFromJson(const FeatureSchema& schema, const nlohmann::json& features);
nlohmann::json toJson(const Percept& p);

/// One line of the event log.
struct EventRecord {
    std::uint64_t step = 0;
    std::string perceptId;
    CategoryId category{};
    bool isNew = false;
    std::string action;
    std::string tier;
    Reward reward = Reward::Neutral;
    std::string outcome;
    std::vector<MergeEvent> merges;
    std::vector<SplitEvent> splits;
    AttributeWeights weightsAfter;

    bool operator==(const EventRecord&) const = default;
};

EventRecord makeEvent(std::uint64_t step, std::string perceptId, const Observation& obs,
                      const ActionChoice& choice, Reward reward, const RewardOutcome& outcome,
                      const KnowledgeGraph& g);

nlohmann::json toJson(const EventRecord& e, const FeatureSchema& schema);

/// Compact single-line JSON.
std::string toLine(const EventRecord& e, const FeatureSchema& schema);

} // namespace catlearn::knowledge
