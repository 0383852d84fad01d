#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "catlearn/harness/config.hpp"
#include "catlearn/harness/runner.hpp"

namespace kn = catlearn::knowledge;
namespace sc = catlearn::scenarios;
namespace hn = catlearn::harness;
using nlohmann::json;

namespace {

std::size_t lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

} // namespace

TEST(RunScenario, SameConfigSameResultAndLog) {
    auto cfg = hn::tunedExampleConfig();
    cfg.variant = sc::Variant::Noisy;
    cfg.seed = 21;
    std::ostringstream a, b;
    const auto r1 = hn::runScenario(cfg, &a);
    const auto r2 = hn::runScenario(cfg, &b);
    EXPECT_EQ(r1, r2);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(lines(a.str()), 200u);
}

TEST(RunScenario, ZeroStepsIsAnEmptyRun) {
    auto cfg = hn::tunedExampleConfig();
    cfg.maxSteps = 0;
    kn::KnowledgeGraph g(sc::sortingSchema(), sc::sortingActions(), {}, 0);
    const auto r = hn::runScenario(cfg, nullptr, &g);
    EXPECT_EQ(r.steps, 0);
    EXPECT_EQ(r.finalCategoryCount, 0u);
    EXPECT_FALSE(r.stepsToDesired);
    EXPECT_FALSE(r.firstFullCoverageStep);
    EXPECT_TRUE(g.categories().empty());
}

TEST(RunScenario, DesiredNeverPrecedesFullCoverage) {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        for (auto variant : {sc::Variant::Exact, sc::Variant::Noisy}) {
            auto cfg = hn::tunedExampleConfig();
            cfg.seed = seed;
            cfg.variant = variant;
            const auto r = hn::runScenario(cfg);
            ASSERT_TRUE(r.firstFullCoverageStep);
            if (r.stepsToDesired) {
                EXPECT_GE(*r.stepsToDesired, *r.firstFullCoverageStep);
            }
        }
    }
}

TEST(RunScenario, TunedExactRunReachesTheTargetSoonAfterCoverage) {
    kn::KnowledgeGraph g(sc::sortingSchema(), sc::sortingActions(), {}, 0);
    const auto r = hn::runScenario(hn::tunedExampleConfig(), nullptr, &g);
    ASSERT_TRUE(r.stepsToDesired);
    EXPECT_TRUE(r.succeededWithin(5));
    EXPECT_TRUE(sc::desiredPartitionReached(g));
    EXPECT_EQ(r.finalCategoryCount, 3u);
}

TEST(RunScenario, InvalidConfigIsRejected) {
    auto cfg = hn::tunedExampleConfig();
    cfg.maxSteps = -1;
    EXPECT_THROW(hn::runScenario(cfg), kn::ConfigError);
    cfg = hn::tunedExampleConfig();
    cfg.params.rhoRa = 1.5;
    EXPECT_THROW(hn::runScenario(cfg), kn::ConfigError);
}

TEST(Sweep, GridIsRectangularAndRowMajor) {
    const auto t = hn::linspace(0.0, 3.0, 4);
    const auto d = hn::linspace(0.0, 0.5, 3);
    auto base = hn::tunedExampleConfig();
    base.maxSteps = 40;
    const auto r = hn::sweep(base, t, d, 2);
    ASSERT_EQ(r.cells.size(), 12u);
    EXPECT_DOUBLE_EQ(r.at(2, 1).thetaMc, 2.0);
    EXPECT_DOUBLE_EQ(r.at(2, 1).deltaAw, 0.25);
    std::ostringstream csv;
    hn::writeSweepCsv(csv, r, 5);
    EXPECT_EQ(lines(csv.str()), 13u);
}

TEST(Sweep, ThresholdAboveTheWeightSumNeverMerges) {
    auto base = hn::tunedExampleConfig();
    const auto r = hn::sweep(base, {3.0 + 1e-9}, hn::defaultDeltaAwRange());
    for (const auto& c : r.cells) {
        EXPECT_GE(c.result.finalCategoryCount, 6u);
        EXPECT_FALSE(c.result.succeeded());
    }
}

TEST(Sweep, ParallelAndSequentialAgree) {
    auto base = hn::tunedExampleConfig();
    base.variant = sc::Variant::Noisy;
    const auto t = hn::linspace(0.0, 3.0, 5);
    const auto d = hn::linspace(0.0, 0.5, 3);
    const auto one = hn::sweep(base, t, d, 1);
    const auto four = hn::sweep(base, t, d, 4);
    std::ostringstream a, b;
    hn::writeSweepCsv(a, one, 15);
    hn::writeSweepCsv(b, four, 15);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, DefaultRangesCoverTheDocumentedGrid) {
    const auto t = hn::defaultThetaMcRange(2);
    const auto d = hn::defaultDeltaAwRange();
    ASSERT_EQ(t.size(), 15u);
    ASSERT_EQ(d.size(), 10u);
    EXPECT_DOUBLE_EQ(t.front(), 0.0);
    EXPECT_DOUBLE_EQ(t.back(), 3.0);
    EXPECT_DOUBLE_EQ(d.back(), 0.5);
    EXPECT_THROW(hn::sweep(hn::tunedExampleConfig(), {}, d), kn::ConfigError);
}

TEST(RunWcst, CapOfOneIsIncomplete) {
    auto cfg = hn::tunedWcstConfig();
    cfg.cap = 1;
    const auto r = hn::runWcst(cfg);
    EXPECT_FALSE(r.completed);
    EXPECT_EQ(r.cardsPresented, 1u);
}

TEST(RunWcst, WeightLogHasOneEntryPerPresentation) {
    auto cfg = hn::tunedWcstConfig();
    cfg.cap = 150;
    std::ostringstream events;
    const auto r = hn::runWcst(cfg, &events);
    EXPECT_EQ(r.perStepWeights.size(), r.cardsPresented);
    EXPECT_EQ(lines(events.str()), r.cardsPresented);
    EXPECT_EQ(static_cast<std::size_t>(r.ruleChanges), r.completions.size());
    for (const auto& w : r.perStepWeights) EXPECT_NEAR(w.sum(), 4.0, 1e-9);
}

TEST(RunWcst, CompletesWhenGivenEnoughCards) {
    auto cfg = hn::tunedWcstConfig();
    cfg.cap = 5000;
    const auto r = hn::runWcst(cfg);
    EXPECT_TRUE(r.completed);
    EXPECT_EQ(r.ruleChanges, 9);
    ASSERT_EQ(r.completions.size(), 9u);
    EXPECT_EQ(r.completions[1].rule, sc::SortingRule::Form);
}

TEST(RuleWeight, DominanceComparesFeatureWeightsOnly) {
    hn::RuleCompletion c;
    c.rule = sc::SortingRule::Form;
    c.weights.features = {0.5, 0.9, 0.6};
    c.weights.experience = 2.0;
    EXPECT_TRUE(hn::ruleWeightDominates(c));
    c.weights.features = {0.9, 0.9, 0.6};
    EXPECT_FALSE(hn::ruleWeightDominates(c));
}

TEST(ScenarioConfig, ParsesAllFields) {
    const auto c = hn::scenarioConfigFromJson(json::parse(R"({
        "scenario": "example", "variant": "noisy", "seed": 9, "maxSteps": 50, "order": "random",
        "parameters": {"thetaMc": 1.25}})"));
    EXPECT_EQ(c.scenario, hn::ScenarioKind::Example);
    EXPECT_EQ(c.run.variant, sc::Variant::Noisy);
    EXPECT_EQ(c.run.order, sc::OrderPolicy::Random);
    EXPECT_EQ(c.run.seed, 9u);
    EXPECT_EQ(c.run.maxSteps, 50);
    EXPECT_DOUBLE_EQ(c.run.params.thetaMc, 1.25);
    EXPECT_DOUBLE_EQ(c.run.params.deltaAw, hn::tunedExampleConfig().params.deltaAw);

    const auto w = hn::scenarioConfigFromJson(json::parse(R"({"scenario": "wcst", "maxSteps": 80})"));
    EXPECT_EQ(w.scenario, hn::ScenarioKind::Wcst);
    EXPECT_EQ(w.wcst.cap, 80u);
    EXPECT_DOUBLE_EQ(w.wcst.params.thetaMc, hn::tunedWcstConfig().params.thetaMc);
    EXPECT_EQ(hn::scenarioConfigFromJson(hn::toJson(w)).wcst.cap, 80u);
}

TEST(ScenarioConfig, RejectsBadFields) {
    for (const char* text : {R"({"scenario": "poker"})", R"({"variant": 3})", R"({"seed": -1})",
                             R"({"order": "sorted"})", R"({"parameters": {"rhoRa": 2}})",
                             R"({"parameters": {"thetaMf": "x"}})", R"([1, 2])"}) {
        EXPECT_THROW(hn::scenarioConfigFromJson(json::parse(text)), kn::ConfigError) << text;
    }
}

TEST(ScenarioConfig, LoadsFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "catlearn_harness_config.json";
    std::ofstream(path) << R"({"scenario": "wcst", "seed": 4})";
    EXPECT_EQ(hn::loadScenarioConfig(path).wcst.seed, 4u);
    std::ofstream(path) << "{nope";
    EXPECT_THROW(hn::loadScenarioConfig(path), kn::ConfigError);
    std::filesystem::remove(path);
    EXPECT_THROW(hn::loadScenarioConfig(path), kn::ConfigError);
}
