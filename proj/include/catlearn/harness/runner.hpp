#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "catlearn/knowledge/graph.hpp"
#include "catlearn/scenarios/example.hpp"
#include "catlearn/scenarios/wcst.hpp"

namespace catlearn::harness {

namespace kn = catlearn::knowledge;
namespace sc = catlearn::scenarios;

inline constexpr int kDefaultMaxSteps = 200;

struct RunConfig {
    sc::Variant variant = sc::Variant::Exact;
    sc::OrderPolicy order = sc::OrderPolicy::RoundRobin;
    std::uint64_t seed = 1;
    /// Presentation order seed; derived from `seed` when absent.
    std::optional<std::uint64_t> orderSeed;
    int maxSteps = kDefaultMaxSteps;
    kn::Parameters params;

    void validate() const; ///< throws kn::ConfigError
};

/// Default example cell, inside the region that reaches the target partition.
RunConfig tunedExampleConfig();

struct RunResult {
    /// First step from which the target partition held through the last step.
    std::optional<int> stepsToDesired;
    /// Step at which every object kind had been presented at least once.
    std::optional<int> firstFullCoverageStep;
    std::size_t finalCategoryCount = 0;
    std::size_t residualCategoryCount = 0;
    int steps = 0;
    std::uint64_t seed = 0;
    kn::Parameters params;
    std::string eventLogPath;

    bool succeeded() const { return stepsToDesired.has_value(); }
    /// Desired partition reached no later than `slack` steps after coverage.
    bool succeededWithin(int slack) const;
    bool operator==(const RunResult&) const = default;
};

/// Runs observe -> select -> reward -> record for config.maxSteps steps.
/// Event lines go to `events` when given; the final graph to `finalGraph`.
RunResult runScenario(const RunConfig& config, std::ostream* events = nullptr,
                      kn::KnowledgeGraph* finalGraph = nullptr);

struct SweepCell {
    double thetaMc = 0.0;
    double deltaAw = 0.0;
    RunResult result;
};

struct SweepResult {
    std::vector<double> thetaMc;
    std::vector<double> deltaAw;
    /// Row-major: thetaMc outer, deltaAw inner.
    std::vector<SweepCell> cells;

    const SweepCell& at(std::size_t i, std::size_t j) const { return cells[i * deltaAw.size() + j]; }
};

/// `count` evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Default grid: theta_mc over [0, M+1] in 15 steps, delta_aw over [0, 0.5]
/// in 10 steps, M being the number of features.
std::vector<double> defaultThetaMcRange(std::size_t featureCount);
std::vector<double> defaultDeltaAwRange();

/// One run per (theta_mc, delta_aw) cell; other settings from `base`.
/// Cells run on up to `threads` workers (0 = hardware concurrency).
SweepResult sweep(const RunConfig& base, const std::vector<double>& thetaMc,
                  const std::vector<double>& deltaAw, unsigned threads = 0);

/// Success is counted when the run reached the target partition within
/// `slack` steps of full coverage.
void writeSweepCsv(std::ostream& out, const SweepResult& result, int slack);

void writeRunCsv(std::ostream& out, const RunResult& r);

/// JSON-lines variants: one object per run or per grid cell.
void writeRunJsonl(std::ostream& out, const RunResult& r);
void writeSweepJsonl(std::ostream& out, const SweepResult& result, int slack);

inline constexpr std::uint64_t kDefaultWcstCap = 600;

struct WcstConfig {
    std::uint64_t seed = 1;
    std::uint64_t cap = kDefaultWcstCap;
    kn::Parameters params;

    void validate() const;
};

struct RuleCompletion {
    std::uint64_t card = 0; ///< 1-based presentation index
    sc::SortingRule rule = sc::SortingRule::Color; ///< rule the finished run used
    kn::AttributeWeights weights;
};

struct WcstResult {
    bool completed = false;
    std::uint64_t cardsPresented = 0;
    int ruleChanges = 0;
    std::vector<kn::AttributeWeights> perStepWeights;
    std::vector<RuleCompletion> completions;
    std::size_t finalCategoryCount = 0;
};

/// Default WCST parameters (fewest cards to completion in tuning).
WcstConfig tunedWcstConfig();

/// True when the completed rule's feature weight strictly exceeds the other
/// feature weights. The experience weight is not compared.
bool ruleWeightDominates(const RuleCompletion& c);

WcstResult runWcst(const WcstConfig& config, std::ostream* events = nullptr,
                   kn::KnowledgeGraph* finalGraph = nullptr);

void writeWcstCsv(std::ostream& out, const WcstResult& r);
/// Summary object plus the weights at every rule completion.
void writeWcstJsonl(std::ostream& out, const WcstResult& r);
/// step,<feature weights...>,experience,ruleCompleted
void writeWcstWeightsCsv(std::ostream& out, const WcstResult& r);

} // namespace catlearn::harness
