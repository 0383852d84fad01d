#include "catlearn/scenarios/example.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "catlearn/knowledge/similarity.hpp"

namespace catlearn::scenarios {

namespace {

constexpr std::size_t kColorArity = 4;
constexpr std::size_t kFormArity = 2;

struct Truth {
    std::size_t color; // red, green, yellow, brown
    std::size_t form;  // rectangular, circular
};

Truth truthOf(ObjectKind k) {
    switch (k) {
    case ObjectKind::GreenApple: return {1, 1};
    case ObjectKind::RedApple: return {0, 1};
    case ObjectKind::BrownApple: return {3, 1};
    case ObjectKind::GreenBlock: return {1, 0};
    case ObjectKind::RedBlock: return {0, 0};
    case ObjectKind::YellowBlock: return {2, 0};
    }
    throw kn::ContractViolation("unknown object kind");
}

std::vector<double> unit(std::size_t arity, std::size_t hot) {
    std::vector<double> v(arity, 0.0);
    v[hot] = 1.0;
    return v;
}

std::vector<double> noisy(std::size_t arity, std::size_t hot, kn::Rng& rng) {
    std::vector<double> v(arity, 0.0);
    const double dominant = rng.uniform(0.7, 1.0);
    v[hot] = dominant;
    std::vector<double> share(arity, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < arity; ++i) {
        if (i == hot) continue;
        share[i] = rng.uniform();
        total += share[i];
    }
    for (std::size_t i = 0; i < arity; ++i) {
        if (i == hot) continue;
        v[i] = total > 0.0 ? (1.0 - dominant) * share[i] / total
                           : (1.0 - dominant) / static_cast<double>(arity - 1);
    }
    return v;
}

std::vector<double> centre(std::size_t arity, std::size_t hot) {
    std::vector<double> v(arity, 0.15 / static_cast<double>(arity - 1));
    v[hot] = 0.85;
    return v;
}

kn::Percept assemble(std::vector<double> color, std::vector<double> form) {
    kn::Percept p;
    p.features.push_back(kn::normalizePercept(color, kColorArity, "color"));
    p.features.push_back(kn::normalizePercept(form, kFormArity, "form"));
    return p;
}

// Highest summed feature similarity to the probe as a one-point category,
// ties by lowest id.
std::optional<kn::CategoryId> nearestCategory(const kn::KnowledgeGraph& g, const kn::Percept& p) {
    const auto probe = kn::categoryFromPercept(kn::CategoryId{}, p);
    std::optional<kn::CategoryId> best;
    double bestScore = 0.0;
    for (const auto& [id, c] : g.categories()) {
        double score = 0.0;
        for (std::size_t f = 0; f < c.featureSets.size(); ++f) score += kn::featureSimilarity(probe, c, f);
        if (!best || score > bestScore) {
            best = id;
            bestScore = score;
        }
    }
    return best;
}

} // namespace

std::string_view toString(ObjectKind k) {
    switch (k) {
    case ObjectKind::GreenApple: return "greenApple";
    case ObjectKind::RedApple: return "redApple";
    case ObjectKind::BrownApple: return "brownApple";
    case ObjectKind::GreenBlock: return "greenBlock";
    case ObjectKind::RedBlock: return "redBlock";
    case ObjectKind::YellowBlock: return "yellowBlock";
    }
    return "?";
}

std::optional<ObjectKind> parseObjectKind(std::string_view text) {
    for (auto k : kAllKinds) {
        if (toString(k) == text) return k;
    }
    return std::nullopt;
}

std::string_view toString(Variant v) { return v == Variant::Exact ? "exact" : "noisy"; }

std::optional<Variant> parseVariant(std::string_view text) {
    if (text == "exact") return Variant::Exact;
    if (text == "noisy") return Variant::Noisy;
    return std::nullopt;
}

kn::FeatureSchema sortingSchema() {
    return {{"color", {"red", "green", "yellow", "brown"}}, {"form", {"rectangular", "circular"}}};
}

std::vector<std::string> sortingActions() { return {"toyBox", "fruitBasket", "rubbishBin"}; }

kn::Percept examplePercept(ObjectKind kind, Variant variant, kn::Rng& rng) {
    const auto t = truthOf(kind);
    if (variant == Variant::Exact) return assemble(unit(kColorArity, t.color), unit(kFormArity, t.form));
    auto color = noisy(kColorArity, t.color, rng);
    auto form = noisy(kFormArity, t.form, rng);
    return assemble(std::move(color), std::move(form));
}

kn::Percept examplePercept(ObjectKind kind, Variant variant, std::uint64_t seed) {
    kn::Rng rng(seed);
    return examplePercept(kind, variant, rng);
}

kn::Percept prototypePercept(ObjectKind kind, Variant variant) {
    const auto t = truthOf(kind);
    if (variant == Variant::Exact) return assemble(unit(kColorArity, t.color), unit(kFormArity, t.form));
    return assemble(centre(kColorArity, t.color), centre(kFormArity, t.form));
}

kn::Reward exampleOracle(ObjectKind kind, SortAction action) {
    SortAction wanted = SortAction::ToyBox;
    switch (kind) {
    case ObjectKind::GreenApple:
    case ObjectKind::RedApple: wanted = SortAction::FruitBasket; break;
    case ObjectKind::BrownApple: wanted = SortAction::RubbishBin; break;
    default: break;
    }
    return action == wanted ? kn::Reward::Positive : kn::Reward::Negative;
}

kn::Reward exampleOracle(ObjectKind kind, kn::ActionIndex action) {
    if (action > static_cast<kn::ActionIndex>(SortAction::RubbishBin)) {
        throw kn::ContractViolation("unknown sorting action " + std::to_string(action));
    }
    return exampleOracle(kind, static_cast<SortAction>(action));
}

PartitionReport desiredPartition(const kn::KnowledgeGraph& g, Variant variant) {
    PartitionReport report;
    std::set<kn::CategoryId> hit;
    bool all = true;
    for (std::size_t i = 0; i < kAllKinds.size(); ++i) {
        const auto probe = prototypePercept(kAllKinds[i], variant);
        std::optional<kn::CategoryId> id;
        if (auto m = g.classify(probe)) id = m->first;
        else if (variant == Variant::Noisy) id = nearestCategory(g, probe);
        if (id) {
            report.assignment[i] = *id;
            hit.insert(*id);
        } else {
            all = false;
        }
    }
    report.residualCategories = g.categories().size() - hit.size();
    if (!all) return report;

    const auto& a = report.assignment;
    const bool applesTogether = a[0] == a[1];
    const bool blocksTogether = a[3] == a[4] && a[4] == a[5];
    const bool distinct = a[0] != a[2] && a[0] != a[3] && a[2] != a[3];
    report.reached = applesTogether && blocksTogether && distinct;
    return report;
}

std::string_view toString(OrderPolicy p) {
    switch (p) {
    case OrderPolicy::RoundRobin: return "roundRobin";
    case OrderPolicy::Random: return "random";
    case OrderPolicy::Fixed: return "fixed";
    }
    return "?";
}

std::optional<OrderPolicy> parseOrderPolicy(std::string_view text) {
    for (auto p : {OrderPolicy::RoundRobin, OrderPolicy::Random, OrderPolicy::Fixed}) {
        if (toString(p) == text) return p;
    }
    return std::nullopt;
}

PresentationOrder::PresentationOrder(OrderPolicy policy, std::uint64_t seed)
    : policy_(policy), rng_(seed), cycle_(kAllKinds) {
    if (policy_ == OrderPolicy::RoundRobin) {
        for (std::size_t i = cycle_.size() - 1; i > 0; --i) std::swap(cycle_[i], cycle_[rng_.index(i + 1)]);
    }
}

ObjectKind PresentationOrder::next() {
    if (policy_ == OrderPolicy::Random) return kAllKinds[rng_.index(kAllKinds.size())];
    const auto k = cycle_[position_];
    position_ = (position_ + 1) % cycle_.size();
    return k;
}

} // namespace catlearn::scenarios
