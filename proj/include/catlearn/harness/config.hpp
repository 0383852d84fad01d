#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "catlearn/harness/runner.hpp"

namespace catlearn::harness {

enum class ScenarioKind { Example, Wcst };

/// Scenario config file:
/// {"scenario": "example"|"wcst", "variant": "exact"|"noisy", "seed": N,
///  "maxSteps": N, "order": "roundRobin"|"random"|"fixed",
///  "parameters": {"rhoRa", "deltaAw", "thetaMc", "thetaMf"}}.
/// Every field is optional. For the WCST, maxSteps is the card cap.
struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::Example;
    RunConfig run = tunedExampleConfig();
    WcstConfig wcst = tunedWcstConfig();
};

/// Throws kn::ConfigError naming the offending field.
ScenarioConfig scenarioConfigFromJson(const nlohmann::json& doc);
ScenarioConfig loadScenarioConfig(const std::filesystem::path& path);

nlohmann::json toJson(const ScenarioConfig& c);

} // namespace catlearn::harness
