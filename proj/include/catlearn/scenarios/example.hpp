#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "catlearn/knowledge/graph.hpp"
#include "catlearn/knowledge/random.hpp"

namespace catlearn::scenarios {

namespace kn = catlearn::knowledge;

/// Objects of the sorting scenario. The learner only ever sees percepts.
enum class ObjectKind { GreenApple, RedApple, BrownApple, GreenBlock, RedBlock, YellowBlock };

inline constexpr std::array<ObjectKind, 6> kAllKinds{
    ObjectKind::GreenApple, ObjectKind::RedApple,   ObjectKind::BrownApple,
    ObjectKind::GreenBlock, ObjectKind::RedBlock,   ObjectKind::YellowBlock};

std::string_view toString(ObjectKind k);
std::optional<ObjectKind> parseObjectKind(std::string_view text);

enum class SortAction : kn::ActionIndex { ToyBox = 0, FruitBasket = 1, RubbishBin = 2 };

enum class Variant { Exact, Noisy };

std::string_view toString(Variant v);
std::optional<Variant> parseVariant(std::string_view text);

/// color [red, green, yellow, brown], form [rectangular, circular].
kn::FeatureSchema sortingSchema();
/// toyBox, fruitBasket, rubbishBin (indices match SortAction).
std::vector<std::string> sortingActions();

/// Simulated classifier output for one object. Exact percepts are unit
/// vectors; noisy ones put a uniform [0.7, 1] share on the true
/// characteristic and spread the rest over the others in seeded proportions.
kn::Percept examplePercept(ObjectKind kind, Variant variant, std::uint64_t seed);
kn::Percept examplePercept(ObjectKind kind, Variant variant, kn::Rng& rng);

/// Representative percept used to probe the learned partition: the unit
/// vector for the exact variant, the noise model's mean for the noisy one.
kn::Percept prototypePercept(ObjectKind kind, Variant variant);

/// Supervisor reward: apples red/green to the fruit basket, blocks to the toy
/// box, brown apples to the rubbish bin; everything else is negative.
kn::Reward exampleOracle(ObjectKind kind, SortAction action);
kn::Reward exampleOracle(ObjectKind kind, kn::ActionIndex action);

struct PartitionReport {
    bool reached = false;
    /// Category each prototype falls into, in kAllKinds order.
    std::array<std::optional<kn::CategoryId>, 6> assignment{};
    /// Categories no prototype falls into.
    std::size_t residualCategories = 0;
};

/// Checks the target grouping {green+red apples}, {brown apples}, {blocks}
/// by classifying one prototype per kind. Residual categories that no
/// prototype fits are tolerated and counted. For the noisy variant a probe
/// that fits nowhere is assigned to the category with the highest summed
/// feature similarity, since noisy intervals never contain the unit vectors.
PartitionReport desiredPartition(const kn::KnowledgeGraph& g, Variant variant = Variant::Exact);

inline bool desiredPartitionReached(const kn::KnowledgeGraph& g,
                                    Variant variant = Variant::Exact) {
    return desiredPartition(g, variant).reached;
}

enum class OrderPolicy {
    RoundRobin, ///< cycles through a seeded permutation of the six kinds
    Random,     ///< independent uniform draw per step
    Fixed,      ///< cycles through the declaration order
};

std::string_view toString(OrderPolicy p);
std::optional<OrderPolicy> parseOrderPolicy(std::string_view text);

class PresentationOrder {
public:
    PresentationOrder(OrderPolicy policy, std::uint64_t seed);

    ObjectKind next();

private:
    OrderPolicy policy_;
    kn::Rng rng_;
    std::array<ObjectKind, 6> cycle_;
    std::size_t position_ = 0;
};

} // namespace catlearn::scenarios
