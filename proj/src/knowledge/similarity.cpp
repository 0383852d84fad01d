#include "catlearn/knowledge/similarity.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace catlearn::knowledge {

double deltaDistance(const FeatureIntervalVector& a, const FeatureIntervalVector& b) {
    if (a.arity() != b.arity()) {
        throw ContractViolation("delta distance between interval vectors of arity " +
                                std::to_string(a.arity()) + " and " +
                                std::to_string(b.arity()));
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < a.arity(); ++i) {
        delta += a.intervals[i].gap(b.intervals[i]);
    }
    return delta;
}

namespace {

std::vector<double> probabilities(std::span<const FeatureIntervalVector> set) {
    double total = 0.0;
    for (const auto& v : set) total += static_cast<double>(v.count);
    std::vector<double> p;
    p.reserve(set.size());
    for (const auto& v : set) p.push_back(static_cast<double>(v.count) / total);
    return p;
}

// sum over `small` of the best match in `large`.
double orientedSimilarity(std::span<const FeatureIntervalVector> small,
                          std::span<const FeatureIntervalVector> large) {
    const auto ps = probabilities(small);
    const auto pl = probabilities(large);
    double total = 0.0;
    for (std::size_t j = 0; j < small.size(); ++j) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < large.size(); ++k) {
            const double term = (1.0 - deltaDistance(small[j], large[k])) * ps[j] * pl[k];
            best = std::max(best, term);
        }
        total += best;
    }
    return total;
}

} // namespace

double featureSimilarity(std::span<const FeatureIntervalVector> a,
                         std::span<const FeatureIntervalVector> b) {
    if (a.empty() || b.empty()) {
        throw ContractViolation("feature similarity of an empty interval-vector set");
    }
    if (a.size() < b.size()) return orientedSimilarity(a, b);
    if (b.size() < a.size()) return orientedSimilarity(b, a);
    return 0.5 * (orientedSimilarity(a, b) + orientedSimilarity(b, a));
}

double featureSimilarity(const ObjectCategory& j, const ObjectCategory& k,
                         std::size_t feature) {
    if (feature >= j.featureSets.size() || feature >= k.featureSets.size()) {
        throw ContractViolation("feature index out of range");
    }
    return featureSimilarity(j.featureSets[feature], k.featureSets[feature]);
}

double experienceSimilarity(const ObjectCategory& j, const ObjectCategory& k) {
    std::set<ActionIndex> actions;
    for (const auto& [a, r] : j.experiences) actions.insert(a);
    for (const auto& [a, r] : k.experiences) actions.insert(a);
    if (actions.empty()) return 0.0;

    int score = 0;
    for (ActionIndex a : actions) {
        auto ij = j.experiences.find(a);
        auto ik = k.experiences.find(a);
        if (ij == j.experiences.end() || ik == k.experiences.end()) continue;
        if (ij->second == Reward::Neutral || ik->second == Reward::Neutral) continue;
        score += ij->second == ik->second ? 1 : -1;
    }
    return static_cast<double>(score) / static_cast<double>(actions.size());
}

std::vector<double> attributeSimilarities(const ObjectCategory& j,
                                          const ObjectCategory& k) {
    if (j.featureSets.size() != k.featureSets.size()) {
        throw ContractViolation("categories declare different feature counts");
    }
    std::vector<double> out;
    out.reserve(j.featureSets.size() + 1);
    for (std::size_t f = 0; f < j.featureSets.size(); ++f) {
        out.push_back(featureSimilarity(j, k, f));
    }
    out.push_back(experienceSimilarity(j, k));
    return out;
}

double weightedSimilarity(std::span<const double> attributes, const AttributeWeights& w) {
    if (attributes.size() != w.attributeCount()) {
        throw ContractViolation("attribute count does not match weight count");
    }
    double sigma = 0.0;
    for (std::size_t i = 0; i < attributes.size(); ++i) sigma += w.at(i) * attributes[i];
    return sigma;
}

double categorySimilarity(const ObjectCategory& j, const ObjectCategory& k,
                          const AttributeWeights& w) {
    const auto attrs = attributeSimilarities(j, k);
    return weightedSimilarity(attrs, w);
}

} // namespace catlearn::knowledge
