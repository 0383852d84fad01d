#include "catlearn/cli/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "catlearn/harness/config.hpp"
#include "catlearn/harness/runner.hpp"
#include "catlearn/knowledge/document.hpp"
#include "catlearn/service/api.hpp"

namespace catlearn::cli {

namespace hn = catlearn::harness;
namespace kn = catlearn::knowledge;
namespace sc = catlearn::scenarios;
namespace sv = catlearn::service;

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flags shared by run, sweep and wcst. Everything is optional; given flags
// override the config file, which overrides the tuned defaults.
struct CommonFlags {
    std::string config;
    std::string scenario;
    std::string variant;
    std::string order;
    std::uint64_t seed = 0;
    std::uint64_t orderSeed = 0;
    double thetaMc = 0, thetaMf = 0, deltaAw = 0, rhoRa = 0;
    long long maxSteps = 0;
    std::string format = "csv";
    std::string out;
    std::string events;
    std::string graphOut;

    CLI::Option* seedOpt = nullptr;
    CLI::Option* orderSeedOpt = nullptr;
    CLI::Option* thetaMcOpt = nullptr;
    CLI::Option* thetaMfOpt = nullptr;
    CLI::Option* deltaAwOpt = nullptr;
    CLI::Option* rhoRaOpt = nullptr;
    CLI::Option* maxStepsOpt = nullptr;
};

void addCommon(CLI::App* app, CommonFlags& f, bool withWeights) {
    app->add_option("--config", f.config, "JSON scenario config; flags override it");
    app->add_option("--scenario", f.scenario, "example | wcst")->check(CLI::IsMember({"example", "wcst"}));
    app->add_option("--variant", f.variant, "exact | noisy")->check(CLI::IsMember({"exact", "noisy"}));
    app->add_option("--order", f.order, "roundRobin | random | fixed")
        ->check(CLI::IsMember({"roundRobin", "random", "fixed"}));
    f.seedOpt = app->add_option("--seed", f.seed, "run seed");
    f.orderSeedOpt = app->add_option("--order-seed", f.orderSeed, "presentation order seed (default: derived from --seed)");
    if (withWeights) {
        f.thetaMcOpt = app->add_option("--theta-mc", f.thetaMc, "category merge threshold");
        f.deltaAwOpt = app->add_option("--delta-aw", f.deltaAw, "weight adaptation step");
    }
    f.thetaMfOpt = app->add_option("--theta-mf", f.thetaMf, "interval fold threshold");
    f.rhoRaOpt = app->add_option("--rho-ra", f.rhoRa, "random action probability");
    f.maxStepsOpt = app->add_option("--max-steps", f.maxSteps, "presentation cap (example default 200, WCST 600)");
    app->add_option("--format", f.format, "csv | jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    app->add_option("--out", f.out, "write results here instead of stdout");
}

hn::ScenarioConfig resolve(const CommonFlags& f) {
    hn::ScenarioConfig c = f.config.empty() ? hn::ScenarioConfig{} : hn::loadScenarioConfig(f.config);
    if (f.scenario == "example") c.scenario = hn::ScenarioKind::Example;
    if (f.scenario == "wcst") c.scenario = hn::ScenarioKind::Wcst;
    if (!f.variant.empty()) c.run.variant = *sc::parseVariant(f.variant);
    if (!f.order.empty()) c.run.order = *sc::parseOrderPolicy(f.order);
    if (f.seedOpt->count()) c.run.seed = c.wcst.seed = f.seed;
    if (f.orderSeedOpt->count()) c.run.orderSeed = f.orderSeed;
    for (auto* params : {&c.run.params, &c.wcst.params}) {
        if (f.thetaMcOpt && f.thetaMcOpt->count()) params->thetaMc = f.thetaMc;
        if (f.deltaAwOpt && f.deltaAwOpt->count()) params->deltaAw = f.deltaAw;
        if (f.thetaMfOpt->count()) params->thetaMf = f.thetaMf;
        if (f.rhoRaOpt->count()) params->rhoRa = f.rhoRa;
    }
    if (f.maxStepsOpt->count()) {
        if (f.maxSteps < 0) throw kn::ConfigError("--max-steps must be nonnegative");
        c.run.maxSteps = static_cast<int>(std::min<long long>(f.maxSteps, std::numeric_limits<int>::max()));
        c.wcst.cap = static_cast<std::uint64_t>(f.maxSteps);
    }
    c.run.validate();
    c.wcst.validate();
    return c;
}

std::ofstream openFile(const std::string& path) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot write " + path);
    return file;
}

// Writes to --out when given, else to the console stream.
template <typename F>
void emit(const std::string& path, std::ostream& console, F&& write) {
    if (path.empty()) {
        write(console);
        return;
    }
    auto file = openFile(path);
    write(file);
    if (!file) throw IoError("cannot write " + path);
}

void saveGraphTo(const std::string& path, const kn::KnowledgeGraph& g) {
    try {
        kn::saveGraph(g, path);
    } catch (const std::exception& e) {
        throw IoError(e.what());
    }
}

int runWcst(const CommonFlags& f, const hn::WcstConfig& config, const std::string& weightsOut,
            std::ostream& out, std::ostream& err) {
    std::optional<std::ofstream> events;
    if (!f.events.empty()) events = openFile(f.events);
    kn::KnowledgeGraph g(sc::wcstSchema(), sc::wcstActions(), config.params, config.seed);
    const auto r = hn::runWcst(config, events ? &*events : nullptr, &g);
    emit(f.out, out, [&](std::ostream& s) {
        if (f.format == "jsonl") hn::writeWcstJsonl(s, r);
        else hn::writeWcstCsv(s, r);
    });
    if (!weightsOut.empty()) emit(weightsOut, out, [&](std::ostream& s) { hn::writeWcstWeightsCsv(s, r); });
    if (!f.graphOut.empty()) saveGraphTo(f.graphOut, g);
    if (!r.completed) {
        err << "incomplete: " << r.ruleChanges << " of " << sc::kRunsToComplete << " rule runs within "
            << r.cardsPresented << " cards\n";
        return kExitIncomplete;
    }
    return kExitOk;
}

int runExample(const CommonFlags& f, const hn::RunConfig& config, std::ostream& out, std::ostream& err) {
    std::optional<std::ofstream> events;
    if (!f.events.empty()) events = openFile(f.events);
    kn::KnowledgeGraph g(sc::sortingSchema(), sc::sortingActions(), config.params, config.seed);
    auto r = hn::runScenario(config, events ? &*events : nullptr, &g);
    r.eventLogPath = f.events;
    emit(f.out, out, [&](std::ostream& s) {
        if (f.format == "jsonl") hn::writeRunJsonl(s, r);
        else hn::writeRunCsv(s, r);
    });
    if (!f.graphOut.empty()) saveGraphTo(f.graphOut, g);
    if (!r.stepsToDesired) {
        err << "incomplete: target partition not reached within " << r.steps << " steps\n";
        return kExitIncomplete;
    }
    return kExitOk;
}

std::vector<double> grid(const std::vector<double>& spec, std::vector<double> fallback, const char* flag) {
    if (spec.empty()) return fallback;
    const double n = spec[2];
    if (n < 1 || n != static_cast<double>(static_cast<std::size_t>(n))) {
        throw kn::ConfigError(std::string(flag) + " needs LO HI N with a positive integer N");
    }
    return hn::linspace(spec[0], spec[1], static_cast<std::size_t>(n));
}

} // namespace

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Incremental object category learning: scenario runs, sweeps and the teaching service",
                 "catlearn"};
    app.require_subcommand(1);

    CommonFlags runFlags;
    auto* run = app.add_subcommand("run", "Run one scenario and report when the target grouping formed");
    addCommon(run, runFlags, true);
    run->add_option("--events", runFlags.events, "write the event log (JSON lines)");
    run->add_option("--graph-out", runFlags.graphOut, "write the final graph document");
    std::string runWeights;
    run->add_option("--weights-out", runWeights, "WCST only: per-card weight CSV");

    CommonFlags sweepFlags;
    auto* sweepCmd = app.add_subcommand("sweep", "Run the example scenario over a thetaMc x deltaAw grid");
    addCommon(sweepCmd, sweepFlags, false);
    std::vector<double> thetaGrid, deltaGrid;
    sweepCmd->add_option("--theta-mc-grid", thetaGrid, "LO HI N (default 0 M+1 15)")->expected(3);
    sweepCmd->add_option("--delta-aw-grid", deltaGrid, "LO HI N (default 0 0.5 10)")->expected(3);
    int slack = -1;
    sweepCmd->add_option("--slack", slack, "success if reached within coverage + slack (default 5 exact, 15 noisy)");
    unsigned threads = 0;
    sweepCmd->add_option("--threads", threads, "worker threads (default: hardware)");

    CommonFlags wcstFlags;
    auto* wcst = app.add_subcommand("wcst", "Run the card sorting test");
    addCommon(wcst, wcstFlags, true);
    wcst->add_option("--events", wcstFlags.events, "write the event log (JSON lines)");
    wcst->add_option("--graph-out", wcstFlags.graphOut, "write the final graph document");
    std::string wcstWeights;
    wcst->add_option("--weights-out", wcstWeights, "per-card weight CSV");

    std::string host = "127.0.0.1";
    int port = 8080;
    std::string storage;
    auto* serve = app.add_subcommand("serve", "Start the teaching service");
    serve->add_option("--host", host, "bind address");
    serve->add_option("--port", port, "port, 0 picks a free one")->check(CLI::Range(0, 65535));
    serve->add_option("--storage", storage, "directory for save/load by file name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (*run) {
            const auto c = resolve(runFlags);
            if (c.scenario == hn::ScenarioKind::Wcst) return runWcst(runFlags, c.wcst, runWeights, out, err);
            if (!runWeights.empty()) throw kn::ConfigError("--weights-out applies to the WCST only");
            return runExample(runFlags, c.run, out, err);
        }
        if (*wcst) {
            auto c = resolve(wcstFlags);
            return runWcst(wcstFlags, c.wcst, wcstWeights, out, err);
        }
        if (*sweepCmd) {
            const auto c = resolve(sweepFlags);
            if (c.scenario != hn::ScenarioKind::Example) throw kn::ConfigError("sweep runs the example scenario only");
            const auto tmc = grid(thetaGrid, hn::defaultThetaMcRange(sc::sortingSchema().size()), "--theta-mc-grid");
            const auto daw = grid(deltaGrid, hn::defaultDeltaAwRange(), "--delta-aw-grid");
            if (slack < 0) slack = c.run.variant == sc::Variant::Exact ? 5 : 15;
            const auto result = hn::sweep(c.run, tmc, daw, threads);
            emit(sweepFlags.out, out, [&](std::ostream& s) {
                if (sweepFlags.format == "jsonl") hn::writeSweepJsonl(s, result, slack);
                else hn::writeSweepCsv(s, result, slack);
            });
            return kExitOk;
        }
        if (*serve) {
            std::optional<std::filesystem::path> dir;
            if (!storage.empty()) {
                if (!std::filesystem::is_directory(storage)) throw kn::ConfigError("--storage is not a directory: " + storage);
                dir = storage;
            }
            sv::SessionManager sessions(dir);
            sv::Api api(sessions);
            sv::HttpServer server(api);
            const int bound = server.bind(host, port);
            if (bound < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
            out << "listening on http://" << host << ':' << bound << std::endl;
            return server.listen() ? kExitOk : kExitFailure;
        }
    } catch (const kn::ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitConfig;
}

} // namespace catlearn::cli
