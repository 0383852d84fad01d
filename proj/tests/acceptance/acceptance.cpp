// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "catlearn/features/geometry.hpp"
#include "catlearn/features/mlp.hpp"
#include "catlearn/features/pipeline.hpp"
#include "catlearn/features/raster.hpp"
#include "catlearn/harness/runner.hpp"
#include "catlearn/knowledge/graph.hpp"
#include "catlearn/knowledge/similarity.hpp"
#include "../support/fixtures.hpp"
#include "../support/geometry_oracles.hpp"
#include "../support/invariants.hpp"

namespace ft = catlearn::features;
namespace hn = catlearn::harness;
namespace kn = catlearn::knowledge;
namespace sc = catlearn::scenarios;
namespace ct = catlearn::testing;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double v, int digits = 3) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

std::string sci(double v) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(1) << v;
    return s.str();
}

kn::FeatureIntervalVector point(std::initializer_list<double> values) {
    kn::FeatureIntervalVector v;
    for (double x : values) v.intervals.push_back({x, x});
    v.count = 1;
    return v;
}

hn::RunConfig exampleBase(sc::Variant variant) {
    auto c = hn::tunedExampleConfig();
    c.variant = variant;
    c.seed = 1;
    c.maxSteps = 200;
    return c;
}

hn::SweepResult defaultSweep(sc::Variant variant) {
    return hn::sweep(exampleBase(variant), hn::defaultThetaMcRange(2), hn::defaultDeltaAwRange());
}

Verdict deltaWorkedExample() {
    const auto a = point({0.7, 0.0, 0.3, 0.1});
    kn::FeatureIntervalVector b;
    b.intervals = {{0.6, 0.8}, {0, 0}, {0, 0}, {0.3, 0.4}};
    b.count = 1;
    const double d = kn::deltaDistance(a, b);
    return {std::abs(d - 0.5) <= 1e-12 && std::abs(kn::deltaDistance(b, a) - 0.5) <= 1e-12,
            "delta = " + fixed(d, 15)};
}

Verdict fitExamples() {
    const auto g = ct::exampleGraph();
    const auto& s3 = g.category(kn::CategoryId{3});
    const auto fits = kn::fitsCategory(ct::percept(g.schema(), {{0.7, 0, 0, 0.3}, {0.1, 0.9}}), s3);
    const auto misses = kn::fitsCategory(ct::percept(g.schema(), {{0.2, 0, 0, 0.8}, {0.1, 0.9}}), s3);
    const bool ok = fits.has_value() && *fits == kn::MatchAssignment{1, 0} && !misses.has_value();
    return {ok, std::string("70/30 object ") + (fits ? "fits" : "does not fit") +
                    ", brownish object " + (misses ? "fits" : "does not fit")};
}

Verdict exactSweep() {
    const auto start = Clock::now();
    const auto r = defaultSweep(sc::Variant::Exact);
    const double elapsed = secondsSince(start);
    std::size_t passing = 0;
    for (const auto& c : r.cells) {
        // stepsToDesired means the partition held from then through step 200.
        if (c.result.succeededWithin(5) && c.result.steps == 200) ++passing;
    }
    return {passing > 0 && elapsed < 10.0,
            std::to_string(passing) + "/" + std::to_string(r.cells.size()) +
                " cells within coverage+5 and stable to 200, grid " + fixed(elapsed) + " s"};
}

Verdict noisySweep() {
    const auto r = defaultSweep(sc::Variant::Noisy);
    std::size_t passing = 0;
    for (const auto& c : r.cells) passing += c.result.succeededWithin(15) ? 1 : 0;
    return {passing > 0, std::to_string(passing) + "/" + std::to_string(r.cells.size()) +
                             " cells within coverage+15"};
}

Verdict permutationRobustness() {
    auto c = exampleBase(sc::Variant::Exact);
    int reached = 0;
    for (std::uint64_t s = 1; s <= 20; ++s) {
        c.orderSeed = s;
        reached += hn::runScenario(c).succeeded() ? 1 : 0;
    }
    return {reached >= 18, std::to_string(reached) + "/20 presentation orders reach the partition at theta_mc=" +
                               fixed(c.params.thetaMc) + ", delta_aw=" + fixed(c.params.deltaAw)};
}

struct WcstBatch {
    std::vector<hn::WcstResult> runs;
    double seconds = 0.0;
};

WcstBatch wcstBatch() {
    WcstBatch b;
    const auto start = Clock::now();
    for (std::uint64_t s = 1; s <= 20; ++s) {
        auto c = hn::tunedWcstConfig();
        c.seed = s;
        b.runs.push_back(hn::runWcst(c));
    }
    b.seconds = secondsSince(start);
    return b;
}

Verdict wcstCompletion(const WcstBatch& b) {
    int completed = 0;
    double meanRuns = 0.0;
    for (const auto& r : b.runs) {
        completed += r.completed ? 1 : 0;
        meanRuns += static_cast<double>(r.completions.size()) / static_cast<double>(b.runs.size());
    }
    return {completed == 20 && b.seconds < 30.0,
            std::to_string(completed) + "/20 complete within 600 cards, mean " + fixed(meanRuns, 2) +
                " of 9 rule runs, " + fixed(b.seconds) + " s"};
}

Verdict wcstWeights(const WcstBatch& b) {
    std::size_t total = 0, dominant = 0;
    for (const auto& r : b.runs) {
        for (const auto& c : r.completions) {
            ++total;
            dominant += hn::ruleWeightDominates(c) ? 1 : 0;
        }
    }
    const double share = total ? static_cast<double>(dominant) / static_cast<double>(total) : 0.0;
    return {total > 0 && share >= 0.6, std::to_string(dominant) + "/" + std::to_string(total) +
                                           " completions with the rule weight as strict maximum (" +
                                           fixed(100 * share, 1) + " %)"};
}

Verdict invariantSuite() {
    const int sequences = 1000;
    for (int i = 0; i < sequences; ++i) {
        const auto s = ct::RandomScenario::make(static_cast<std::uint64_t>(i) + 1);
        std::string failure;
        const auto log = ct::driveScenario(s, 1000 + static_cast<std::uint64_t>(i), failure);
        if (!failure.empty()) return {false, "sequence " + std::to_string(i) + ": " + failure};
        std::string again;
        if (ct::driveScenario(s, 1000 + static_cast<std::uint64_t>(i), again) != log) {
            return {false, "sequence " + std::to_string(i) + " is not deterministic"};
        }
    }
    return {true, std::to_string(sequences) + " randomized sequences, all invariants hold"};
}

Verdict featurePipeline() {
    std::vector<std::string> failed;

    // Quarter-average example in the upper-right quarter of a 10x10 box.
    const int quarter[5][5] = {{0, 0, 0, 0, 0},
                               {130, 0, 0, 0, 0},
                               {134, 137, 0, 0, 0},
                               {138, 135, 139, 0, 0},
                               {140, 138, 140, 0, 0}};
    ft::Raster r(10, 10);
    for (std::size_t y = 0; y < 10; ++y) {
        for (std::size_t x = 0; x < 5; ++x) r.set(x, y, {1.0, 1.0});
    }
    for (std::size_t y = 5; y < 10; ++y) {
        for (std::size_t x = 5; x < 10; ++x) r.set(x, y, {1.0, 1.0});
    }
    for (std::size_t y = 0; y < 5; ++y) {
        for (std::size_t x = 0; x < 5; ++x) {
            if (quarter[y][x]) r.set(5 + x, y, {0.0, static_cast<double>(quarter[y][x])});
        }
    }
    const double b = ft::quarterAverages(r)[3];
    if (std::abs(b - 1231.0 / 9.0) > 0.5) failed.push_back("quarter average " + fixed(b));

    ft::ObjectSpec disk;
    disk.shape = ft::Shape::Circle;
    disk.radius = 40;
    const auto ratios = ft::shapeRatios(ft::silhouette(ft::renderObject(disk, 100, 100)));
    if (std::abs(ratios[0] / (std::numbers::pi / 4) - 1) > 0.02 || std::abs(ratios[1] - 1) > 0.02) {
        failed.push_back("circle ratios " + fixed(ratios[0]) + "/" + fixed(ratios[1]));
    }

    kn::Rng rng(2024);
    int mecMismatch = 0;
    for (int t = 0; t < 200; ++t) {
        std::vector<ft::Point> pts;
        const std::size_t n = 1 + rng.index(12);
        for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0)});
        const auto c = ft::minEnclosingCircle(pts, static_cast<std::uint64_t>(t));
        if (!ct::coversAll(c, pts) || std::abs(c.radius - ct::bruteForceEnclosingRadius(pts)) > 1e-9) ++mecMismatch;
    }
    if (mecMismatch) failed.push_back(std::to_string(mecMismatch) + " enclosing-circle mismatches");

    double worstGradient = 0.0;
    {
        ft::Mlp m(8, 10, 4, 5);
        ft::Dataset d = ft::colorDataset(2, 3);
        const auto g = m.gradient(d);
        const double h = 1e-6;
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto w = m.weights();
            ft::Mlp plus = m, minus = m;
            w[i] += h;
            plus.setWeights(w);
            w[i] -= 2 * h;
            minus.setWeights(w);
            worstGradient = std::max(worstGradient, std::abs((plus.loss(d) - minus.loss(d)) / (2 * h) - g[i]));
        }
    }
    if (worstGradient >= 1e-4) failed.push_back("gradient error " + sci(worstGradient));

    const auto colors = ft::colorDataset(50, 1);
    ft::Mlp color(8, 10, 4, 3);
    ft::rpropTrain(color, colors, 500);
    const double colorAcc = ft::accuracy(color, colors);
    const auto shapes = ft::shapeDataset(100, 2);
    ft::Mlp shape(2, 2, 2, 4);
    ft::rpropTrain(shape, shapes, 500);
    const double shapeAcc = ft::accuracy(shape, shapes);
    if (colorAcc < 0.95 || shapeAcc < 0.95) failed.push_back("training accuracy below 95 %");

    std::string detail = "quarter " + fixed(b) + ", circle " + fixed(ratios[0]) + "/" + fixed(ratios[1]) +
                         ", MEC 200 sets, gradient err " + sci(worstGradient) + ", nets " +
                         fixed(colorAcc, 2) + "/" + fixed(shapeAcc, 2);
    for (const auto& f : failed) detail += "; " + f;
    return {failed.empty(), detail};
}

/// Number of 4-connected components among the passing cells.
std::size_t successComponents(const hn::SweepResult& r, int slack) {
    const std::size_t rows = r.thetaMc.size(), cols = r.deltaAw.size();
    std::vector<bool> seen(rows * cols, false);
    std::size_t components = 0;
    for (std::size_t start = 0; start < rows * cols; ++start) {
        if (seen[start] || !r.cells[start].result.succeededWithin(slack)) continue;
        ++components;
        std::queue<std::size_t> open;
        open.push(start);
        seen[start] = true;
        while (!open.empty()) {
            const std::size_t k = open.front();
            open.pop();
            const std::size_t i = k / cols, j = k % cols;
            std::vector<std::size_t> next;
            if (i > 0) next.push_back(k - cols);
            if (i + 1 < rows) next.push_back(k + cols);
            if (j > 0) next.push_back(k - 1);
            if (j + 1 < cols) next.push_back(k + 1);
            for (std::size_t n : next) {
                if (!seen[n] && r.cells[n].result.succeededWithin(slack)) {
                    seen[n] = true;
                    open.push(n);
                }
            }
        }
    }
    return components;
}

Verdict sweepExtremes() {
    const double weightSum = 3.0;
    const auto high = hn::sweep(exampleBase(sc::Variant::Exact), {weightSum + 1e-9}, hn::defaultDeltaAwRange());
    std::size_t fewest = SIZE_MAX;
    for (const auto& c : high.cells) fewest = std::min(fewest, c.result.finalCategoryCount);
    const auto grid = defaultSweep(sc::Variant::Exact);
    const std::size_t components = successComponents(grid, 5);
    return {fewest >= 6 && components == 1,
            "theta_mc above the weight sum leaves at least " + std::to_string(fewest) +
                " categories, success region has " + std::to_string(components) + " component(s)"};
}

} // namespace

int main() {
    int failures = 0;
    auto report = [&](const std::string& name, const std::function<Verdict()>& check) {
        const auto start = Clock::now();
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += v.pass ? 0 : 1;
        std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << " [" << fixed(secondsSince(start))
                  << " s]" << std::endl;
    };

    report("delta-worked-example", deltaWorkedExample);
    report("fit-examples", fitExamples);
    report("example-exact-sweep", exactSweep);
    report("example-noisy-sweep", noisySweep);
    report("permutation-robustness", permutationRobustness);
    const auto wcst = wcstBatch();
    report("wcst-completion", [&] { return wcstCompletion(wcst); });
    report("wcst-weight-diagnostic", [&] { return wcstWeights(wcst); });
    report("invariant-suite", invariantSuite);
    report("feature-pipeline", featurePipeline);
    report("sweep-extremes", sweepExtremes);

    std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << std::endl;
    return failures ? 1 : 0;
}
