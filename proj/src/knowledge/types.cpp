#include "catlearn/knowledge/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace catlearn::knowledge {

std::string_view toString(Reward r) {
    switch (r) {
    case Reward::Negative: return "negative";
    case Reward::Neutral: return "neutral";
    case Reward::Positive: return "positive";
    }
    return "neutral";
}

std::optional<Reward> parseReward(std::string_view text) {
    if (text == "positive") return Reward::Positive;
    if (text == "neutral") return Reward::Neutral;
    if (text == "negative") return Reward::Negative;
    return std::nullopt;
}

FeatureVector normalizePercept(std::span<const double> raw, std::size_t arity,
                               std::string featureId) {
    if (raw.size() != arity) {
        throw ContractViolation("percept for feature '" + featureId + "' has " +
                                std::to_string(raw.size()) + " values, expected " +
                                std::to_string(arity));
    }
    std::vector<double> values(raw.begin(), raw.end());
    double sum = 0.0;
    for (double& v : values) {
        if (!std::isfinite(v)) {
            throw DegenerateInput("non-finite value in feature '" + featureId + "'");
        }
        v = std::max(v, 0.0);
        sum += v;
    }
    if (sum <= 0.0) {
        throw DegenerateInput("feature '" + featureId + "' has no positive value");
    }
    for (double& v : values) v /= sum;
    return {std::move(featureId), std::move(values)};
}

Percept makePercept(const FeatureSchema& schema,
                    const std::map<std::string, std::vector<double>>& raw) {
    if (raw.size() != schema.size()) {
        throw ContractViolation("percept has " + std::to_string(raw.size()) +
                                " features, schema declares " +
                                std::to_string(schema.size()));
    }
    Percept p;
    p.features.reserve(schema.size());
    for (const auto& f : schema) {
        auto it = raw.find(f.id);
        if (it == raw.end()) {
            throw ContractViolation("percept is missing feature '" + f.id + "'");
        }
        p.features.push_back(normalizePercept(it->second, f.arity(), f.id));
    }
    return p;
}

void validatePercept(const FeatureSchema& schema, const Percept& p) {
    if (p.features.size() != schema.size()) {
        throw ContractViolation("percept feature count does not match schema");
    }
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (p.features[i].featureId != schema[i].id ||
            p.features[i].values.size() != schema[i].arity()) {
            throw ContractViolation("percept feature '" + p.features[i].featureId +
                                    "' does not match schema feature '" + schema[i].id + "'");
        }
    }
}

double CharacteristicInterval::gap(const CharacteristicInterval& other) const {
    if (other.lo > hi) return other.lo - hi;
    if (lo > other.hi) return lo - other.hi;
    return 0.0;
}

FeatureIntervalVector FeatureIntervalVector::fromPoint(std::span<const double> values) {
    FeatureIntervalVector v;
    v.intervals.reserve(values.size());
    for (double x : values) v.intervals.push_back({x, x});
    v.count = 1;
    return v;
}

bool FeatureIntervalVector::contains(std::span<const double> values) const {
    if (values.size() != intervals.size()) return false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!intervals[i].contains(values[i])) return false;
    }
    return true;
}

std::uint64_t ObjectCategory::totalCount(std::size_t feature) const {
    std::uint64_t total = 0;
    for (const auto& v : featureSets.at(feature)) total += v.count;
    return total;
}

double ObjectCategory::probability(std::size_t feature, std::size_t index) const {
    const auto total = totalCount(feature);
    return static_cast<double>(featureSets.at(feature).at(index).count) /
           static_cast<double>(total);
}

ObjectCategory categoryFromPercept(CategoryId id, const Percept& p) {
    ObjectCategory c;
    c.id = id;
    c.featureSets.reserve(p.features.size());
    for (const auto& f : p.features) {
        c.featureSets.push_back({FeatureIntervalVector::fromPoint(f.values)});
    }
    return c;
}

AttributeWeights AttributeWeights::initial(std::size_t featureCount) {
    return {std::vector<double>(featureCount, 1.0), 1.0};
}

double AttributeWeights::at(std::size_t attribute) const {
    return attribute < features.size() ? features.at(attribute) : experience;
}

double& AttributeWeights::at(std::size_t attribute) {
    return attribute < features.size() ? features.at(attribute) : experience;
}

double AttributeWeights::sum() const {
    return std::accumulate(features.begin(), features.end(), 0.0) + experience;
}

void Parameters::validate() const {
    if (!(rhoRa >= 0.0 && rhoRa <= 1.0)) {
        throw ConfigError("rhoRa must lie in [0, 1]");
    }
    if (!(deltaAw >= 0.0) || !std::isfinite(deltaAw)) {
        throw ConfigError("deltaAw must be a nonnegative number");
    }
    if (!std::isfinite(thetaMc)) {
        throw ConfigError("thetaMc must be finite");
    }
    if (!(thetaMf >= 0.0 && thetaMf <= 2.0)) {
        throw ConfigError("thetaMf must lie in [0, 2]");
    }
}

} // namespace catlearn::knowledge
