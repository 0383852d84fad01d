#include "catlearn/harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <ostream>
#include <set>
#include <thread>

#include "catlearn/knowledge/document.hpp"

namespace catlearn::harness {

namespace {

constexpr std::uint64_t kOrderStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kDeckStream = 3;

std::string optionalInt(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

nlohmann::json optionalJson(const std::optional<int>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json runJson(const RunResult& r) {
    return {{"seed", r.seed},
            {"parameters", kn::toJson(r.params)},
            {"steps", r.steps},
            {"stepsToDesired", optionalJson(r.stepsToDesired)},
            {"firstFullCoverageStep", optionalJson(r.firstFullCoverageStep)},
            {"finalCategoryCount", r.finalCategoryCount},
            {"residualCategoryCount", r.residualCategoryCount},
            {"eventLogPath", r.eventLogPath}};
}

nlohmann::json weightsJson(const kn::AttributeWeights& w) {
    return {{"features", w.features}, {"experience", w.experience}};
}

// Shortest text that reads back to the same double.
std::string number(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

} // namespace

RunConfig tunedExampleConfig() {
    RunConfig c;
    c.params.rhoRa = 0.0;
    c.params.thetaMf = 0.3;
    c.params.thetaMc = 9.0 / 14.0;
    c.params.deltaAw = 4.0 / 9.0;
    return c;
}

WcstConfig tunedWcstConfig() {
    WcstConfig c;
    c.params.rhoRa = 0.0;
    c.params.thetaMf = 0.3;
    c.params.thetaMc = 2.25;
    c.params.deltaAw = 0.01;
    return c;
}

void RunConfig::validate() const {
    if (maxSteps < 0) throw kn::ConfigError("maxSteps must be non-negative");
    params.validate();
}

bool RunResult::succeededWithin(int slack) const {
    return stepsToDesired && firstFullCoverageStep && *stepsToDesired <= *firstFullCoverageStep + slack;
}

RunResult runScenario(const RunConfig& config, std::ostream* events, kn::KnowledgeGraph* finalGraph) {
    config.validate();
    kn::KnowledgeGraph g(sc::sortingSchema(), sc::sortingActions(), config.params, config.seed);
    sc::PresentationOrder order(config.order, config.orderSeed.value_or(kn::deriveSeed(config.seed, kOrderStream)));
    kn::Rng noise(kn::deriveSeed(config.seed, kNoiseStream));

    RunResult result;
    result.seed = config.seed;
    result.params = config.params;
    std::set<sc::ObjectKind> seen;
    int lastUndesired = 0;
    bool desired = false;
    sc::PartitionReport report;

    for (int step = 1; step <= config.maxSteps; ++step) {
        const auto kind = order.next();
        seen.insert(kind);
        if (!result.firstFullCoverageStep && seen.size() == sc::kAllKinds.size()) {
            result.firstFullCoverageStep = step;
        }
        const auto obs = g.observe(sc::examplePercept(kind, config.variant, noise));
        const auto choice = g.selectAction(obs.category);
        const auto reward = sc::exampleOracle(kind, choice.action);
        const auto outcome = g.recordReward(obs, choice.action, reward);
        if (events) {
            *events << kn::toLine(kn::makeEvent(static_cast<std::uint64_t>(step), std::string(sc::toString(kind)),
                                                obs, choice, reward, outcome, g),
                                  g.schema())
                    << '\n';
        }
        report = sc::desiredPartition(g, config.variant);
        desired = report.reached;
        if (!desired) lastUndesired = step;
        result.steps = step;
    }
    if (desired) result.stepsToDesired = lastUndesired + 1;
    result.finalCategoryCount = g.categories().size();
    result.residualCategoryCount = report.residualCategories;
    if (finalGraph) *finalGraph = std::move(g);
    return result;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> v;
    if (count == 0) return v;
    if (count == 1) return {lo};
    for (std::size_t i = 0; i < count; ++i) {
        v.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return v;
}

std::vector<double> defaultThetaMcRange(std::size_t featureCount) {
    return linspace(0.0, static_cast<double>(featureCount + 1), 15);
}

std::vector<double> defaultDeltaAwRange() { return linspace(0.0, 0.5, 10); }

SweepResult sweep(const RunConfig& base, const std::vector<double>& thetaMc,
                  const std::vector<double>& deltaAw, unsigned threads) {
    if (thetaMc.empty() || deltaAw.empty()) throw kn::ConfigError("sweep ranges must be non-empty");
    SweepResult out{thetaMc, deltaAw, {}};
    for (double t : thetaMc) {
        for (double d : deltaAw) {
            RunConfig cfg = base;
            cfg.params.thetaMc = t;
            cfg.params.deltaAw = d;
            cfg.validate();
            out.cells.push_back({t, d, {}});
        }
    }
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(out.cells.size()));

    std::atomic<std::size_t> nextCell{0};
    auto work = [&] {
        for (std::size_t i = nextCell++; i < out.cells.size(); i = nextCell++) {
            RunConfig cfg = base;
            cfg.params.thetaMc = out.cells[i].thetaMc;
            cfg.params.deltaAw = out.cells[i].deltaAw;
            out.cells[i].result = runScenario(cfg);
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return out;
}

void writeSweepCsv(std::ostream& out, const SweepResult& result, int slack) {
    out << "thetaMc,deltaAw,success,stepsToDesired,firstFullCoverageStep,finalCategoryCount,"
           "residualCategoryCount\n";
    for (const auto& c : result.cells) {
        const auto& r = c.result;
        out << number(c.thetaMc) << ',' << number(c.deltaAw) << ',' << (r.succeededWithin(slack) ? 1 : 0)
            << ',' << optionalInt(r.stepsToDesired) << ',' << optionalInt(r.firstFullCoverageStep) << ','
            << r.finalCategoryCount << ',' << r.residualCategoryCount << '\n';
    }
}

void writeRunCsv(std::ostream& out, const RunResult& r) {
    out << "seed,thetaMc,thetaMf,deltaAw,rhoRa,steps,stepsToDesired,firstFullCoverageStep,"
           "finalCategoryCount,residualCategoryCount,eventLogPath\n";
    out << r.seed << ',' << number(r.params.thetaMc) << ',' << number(r.params.thetaMf) << ','
        << number(r.params.deltaAw) << ',' << number(r.params.rhoRa) << ',' << r.steps << ','
        << optionalInt(r.stepsToDesired) << ',' << optionalInt(r.firstFullCoverageStep) << ','
        << r.finalCategoryCount << ',' << r.residualCategoryCount << ',' << r.eventLogPath << '\n';
}

void WcstConfig::validate() const { params.validate(); }

bool ruleWeightDominates(const RuleCompletion& c) {
    const auto rule = static_cast<std::size_t>(c.rule);
    const double w = c.weights.features.at(rule);
    for (std::size_t i = 0; i < c.weights.features.size(); ++i) {
        if (i != rule && c.weights.features[i] >= w) return false;
    }
    return true;
}

WcstResult runWcst(const WcstConfig& config, std::ostream* events, kn::KnowledgeGraph* finalGraph) {
    config.validate();
    kn::KnowledgeGraph g(sc::wcstSchema(), sc::wcstActions(), config.params, config.seed);
    sc::WcstDealer dealer(kn::deriveSeed(config.seed, kDeckStream));
    sc::WcstState state;
    WcstResult result;

    while (!state.complete() && result.cardsPresented < config.cap) {
        const auto card = dealer.next();
        const auto obs = g.observe(sc::wcstPercept(card));
        const auto choice = g.selectAction(obs.category);
        const auto step = sc::wcstOracle(state, card, static_cast<int>(choice.action) + 1);
        const auto outcome = g.recordReward(obs, choice.action, step.reward);
        ++result.cardsPresented;
        result.perStepWeights.push_back(g.weights());
        if (step.runCompleted) {
            ++result.ruleChanges;
            result.completions.push_back({result.cardsPresented, state.activeRule, g.weights()});
        }
        if (events) {
            *events << kn::toLine(kn::makeEvent(result.cardsPresented, card.label(), obs, choice,
                                                step.reward, outcome, g),
                                  g.schema())
                    << '\n';
        }
        state = step.next;
    }
    result.completed = state.complete();
    result.finalCategoryCount = g.categories().size();
    if (finalGraph) *finalGraph = std::move(g);
    return result;
}

void writeWcstCsv(std::ostream& out, const WcstResult& r) {
    out << "completed,cardsPresented,ruleChanges,finalCategoryCount\n";
    out << (r.completed ? 1 : 0) << ',' << r.cardsPresented << ',' << r.ruleChanges << ','
        << r.finalCategoryCount << '\n';
}

void writeRunJsonl(std::ostream& out, const RunResult& r) { out << runJson(r).dump() << '\n'; }

void writeSweepJsonl(std::ostream& out, const SweepResult& result, int slack) {
    for (const auto& c : result.cells) {
        auto row = runJson(c.result);
        row["thetaMc"] = c.thetaMc;
        row["deltaAw"] = c.deltaAw;
        row["success"] = c.result.succeededWithin(slack);
        out << row.dump() << '\n';
    }
}

void writeWcstJsonl(std::ostream& out, const WcstResult& r) {
    nlohmann::json completions = nlohmann::json::array();
    for (const auto& c : r.completions) {
        completions.push_back({{"card", c.card},
                               {"rule", sc::toString(c.rule)},
                               {"weights", weightsJson(c.weights)},
                               {"ruleWeightDominates", ruleWeightDominates(c)}});
    }
    out << nlohmann::json{{"completed", r.completed},
                          {"cardsPresented", r.cardsPresented},
                          {"ruleChanges", r.ruleChanges},
                          {"finalCategoryCount", r.finalCategoryCount},
                          {"completions", completions}}
               .dump()
        << '\n';
}

void writeWcstWeightsCsv(std::ostream& out, const WcstResult& r) {
    const auto schema = sc::wcstSchema();
    out << "step";
    for (const auto& f : schema) out << ',' << f.id;
    out << ",experience,ruleCompleted\n";
    std::size_t next = 0;
    for (std::size_t i = 0; i < r.perStepWeights.size(); ++i) {
        const auto& w = r.perStepWeights[i];
        out << i + 1;
        for (double v : w.features) out << ',' << number(v);
        out << ',' << number(w.experience) << ',';
        if (next < r.completions.size() && r.completions[next].card == i + 1) {
            out << sc::toString(r.completions[next].rule);
            ++next;
        }
        out << '\n';
    }
}

} // namespace catlearn::harness
