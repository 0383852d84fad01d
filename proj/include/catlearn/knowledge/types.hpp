#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace catlearn::knowledge {

/// Tolerance for closed-interval containment and overlap tests.
inline constexpr double kIntervalEpsilon = 1e-9;

// ---------------------------------------------------------------------------
// Errors

/// A caller broke an operation's precondition (unknown id, arity mismatch...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Input that cannot be turned into a percentage vector (all zero).
class DegenerateInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid parameters, schema or action set.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Identifiers

enum class CategoryId : std::uint64_t {};

constexpr std::uint64_t raw(CategoryId id) { return static_cast<std::uint64_t>(id); }

/// Index into the graph's declared action set. Lower index = "lower action id".
using ActionIndex = std::size_t;

enum class Reward { Negative, Neutral, Positive };

std::string_view toString(Reward r);
std::optional<Reward> parseReward(std::string_view text);

/// True for (positive, negative) and (negative, positive).
constexpr bool opposed(Reward a, Reward b) {
    return (a == Reward::Positive && b == Reward::Negative) ||
           (a == Reward::Negative && b == Reward::Positive);
}

// ---------------------------------------------------------------------------
// Feature data

struct FeatureSpec {
    std::string id;
    std::vector<std::string> characteristics;

    std::size_t arity() const { return characteristics.size(); }
    bool operator==(const FeatureSpec&) const = default;
};

using FeatureSchema = std::vector<FeatureSpec>;

/// A percept's normalized percentages for one feature.
struct FeatureVector {
    std::string featureId;
    std::vector<double> values;

    bool operator==(const FeatureVector&) const = default;
};

/// Clamps negatives to zero and rescales to unit sum.
/// Throws DegenerateInput when nothing positive remains, ContractViolation
/// when the length differs from `arity`.
FeatureVector normalizePercept(std::span<const double> raw, std::size_t arity,
                               std::string featureId = {});

/// One feature vector per schema feature, in schema order.
struct Percept {
    std::vector<FeatureVector> features;

    bool operator==(const Percept&) const = default;
};

/// Builds a percept from a featureId -> raw values map, normalizing each
/// vector. The map must cover exactly the schema's features.
Percept makePercept(const FeatureSchema& schema,
                    const std::map<std::string, std::vector<double>>& raw);

/// Throws ContractViolation unless `p` matches the schema's ids and arities.
void validatePercept(const FeatureSchema& schema, const Percept& p);

struct CharacteristicInterval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const {
        return v >= lo - kIntervalEpsilon && v <= hi + kIntervalEpsilon;
    }
    /// Shortest distance between the intervals; 0 when they overlap or touch.
    double gap(const CharacteristicInterval& other) const;

    bool operator==(const CharacteristicInterval&) const = default;
};

/// A category's intervals for one feature plus how many percepts it absorbed.
struct FeatureIntervalVector {
    std::vector<CharacteristicInterval> intervals;
    std::uint64_t count = 1;

    /// Degenerate [v, v] intervals with count 1.
    static FeatureIntervalVector fromPoint(std::span<const double> values);

    std::size_t arity() const { return intervals.size(); }
    bool contains(std::span<const double> values) const;

    bool operator==(const FeatureIntervalVector&) const = default;
};

// ---------------------------------------------------------------------------
// Categories

struct ObjectCategory {
    CategoryId id{};
    /// Interval vector sets, indexed like the feature schema.
    std::vector<std::vector<FeatureIntervalVector>> featureSets;
    /// At most one reward per action.
    std::map<ActionIndex, Reward> experiences;

    /// Occurrence probability P(c) of interval vector `index` of `feature`.
    double probability(std::size_t feature, std::size_t index) const;
    std::uint64_t totalCount(std::size_t feature) const;

    bool operator==(const ObjectCategory&) const = default;
};

/// Builds a category holding exactly the percept as degenerate intervals.
ObjectCategory categoryFromPercept(CategoryId id, const Percept& p);

// ---------------------------------------------------------------------------
// Weights and parameters

/// Attribute order everywhere: features in schema order, experience last.
struct AttributeWeights {
    std::vector<double> features;
    double experience = 1.0;

    static AttributeWeights initial(std::size_t featureCount);

    std::size_t attributeCount() const { return features.size() + 1; }
    double at(std::size_t attribute) const;
    double& at(std::size_t attribute);
    double sum() const;

    bool operator==(const AttributeWeights&) const = default;
};

struct Parameters {
    double rhoRa = 0.0;   ///< probability of a uniformly random action
    double deltaAw = 0.1; ///< weight adaptation step
    double thetaMc = 1.5; ///< category merge threshold, compared to raw similarity
    double thetaMf = 0.3; ///< interval-vector fold threshold on delta distance

    /// Throws ConfigError when out of range.
    void validate() const;

    bool operator==(const Parameters&) const = default;
};

} // namespace catlearn::knowledge
