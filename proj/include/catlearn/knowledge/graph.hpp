#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catlearn/knowledge/random.hpp"
#include "catlearn/knowledge/types.hpp"

namespace catlearn::knowledge {

/// Chosen interval vector per feature (indices into the category's sets).
using MatchAssignment = std::vector<std::size_t>;

/// Returns the assignment iff every feature of `p` is contained in some
/// interval vector of `c`. Among several containing vectors the one with the
/// smallest delta distance to the percept wins, ties by lowest index.
std::optional<MatchAssignment> fitsCategory(const Percept& p, const ObjectCategory& c);

struct Observation {
    CategoryId category{};
    bool isNew = false;
    Percept percept;
    /// Interval vectors whose counts were incremented; empty for new categories.
    MatchAssignment matched;
};

enum class SelectionTier {
    Random,     ///< exploration branch
    Positive,   ///< positive experience with the category itself
    Analogy,    ///< borrowed from a positively similar category
    Untried,    ///< uniform over actions without a negative experience
    Fallback,   ///< uniform over the full set; everything was punished
};

std::string_view toString(SelectionTier t);

struct ActionChoice {
    ActionIndex action = 0;
    SelectionTier tier = SelectionTier::Random;
    std::optional<CategoryId> borrowedFrom;
};

enum class AdaptationCase { Merged, Split, ContradictingFirstExperience };

std::string_view toString(AdaptationCase c);

struct WeightAdaptation {
    AdaptationCase reason{};
    CategoryId first{};
    CategoryId second{};
    std::size_t attribute = 0;
    double decrement = 0.0;
};

struct MergeEvent {
    CategoryId kept{};
    CategoryId absorbed{};
    double similarity = 0.0;
};

struct SplitEvent {
    CategoryId from{};
    CategoryId created{};
};

enum class RewardOutcomeKind { Updated, Unchanged, Split };

std::string_view toString(RewardOutcomeKind k);

struct RewardOutcome {
    RewardOutcomeKind kind = RewardOutcomeKind::Unchanged;
    std::optional<SplitEvent> split;
    std::vector<MergeEvent> merges;
    std::vector<WeightAdaptation> adaptations;
};

/// Cached per-pair similarity. `attributes` is independent of the weights.
struct PairSimilarity {
    std::vector<double> attributes;
    double value = 0.0;

    bool operator==(const PairSimilarity&) const = default;
};

/// The symbolic knowledge base: object categories, attribute weights and the
/// similarity cache. Single writer; const members are safe to share between
/// mutations.
class KnowledgeGraph {
public:
    KnowledgeGraph(FeatureSchema schema, std::vector<std::string> actions,
                   Parameters params, std::uint64_t seed);

    const FeatureSchema& schema() const { return schema_; }
    const std::vector<std::string>& actions() const { return actions_; }
    const Parameters& parameters() const { return params_; }
    const AttributeWeights& weights() const { return weights_; }
    const std::map<CategoryId, ObjectCategory>& categories() const { return categories_; }
    const Rng& rng() const { return rng_; }
    CategoryId nextId() const { return nextId_; }

    std::size_t attributeCount() const { return schema_.size() + 1; }
    std::optional<ActionIndex> actionIndex(std::string_view name) const;
    const std::string& actionName(ActionIndex a) const;

    const ObjectCategory& category(CategoryId id) const;
    bool contains(CategoryId id) const { return categories_.contains(id); }

    /// Cached similarity of two distinct categories (order-free).
    double similarity(CategoryId a, CategoryId b) const;
    const PairSimilarity& pair(CategoryId a, CategoryId b) const;
    const std::map<std::pair<CategoryId, CategoryId>, PairSimilarity>& similarities() const {
        return similarities_;
    }

    /// Category `p` would be assigned to, without mutating anything. Among
    /// several fitting categories the most recently created one wins.
    std::optional<std::pair<CategoryId, MatchAssignment>> classify(const Percept& p) const;

    /// Most similar other category (ties by lowest id), if any.
    std::optional<CategoryId> mostSimilar(CategoryId c) const;

    // --- mutations -------------------------------------------------------

    /// Files the percept into its fitting category (incrementing the matched
    /// counts) or creates a new category from it.
    Observation observe(const Percept& p);

    /// Picks an action for category `c`, consuming randomness from the
    /// graph's generator.
    ActionChoice selectAction(CategoryId c);

    /// Stores the reward for the action taken on `obs`, splitting the percept
    /// off on contradiction, then runs the merge pass.
    RewardOutcome recordReward(const Observation& obs, ActionIndex action, Reward reward);

    /// Merges the most similar eligible pair while its similarity reaches the
    /// merge threshold.
    std::vector<MergeEvent> mergePass(std::vector<WeightAdaptation>* adaptations = nullptr);

    /// Moves weight away from one attribute of the (j, k) pair. Returns the
    /// adaptation applied, or nullopt for a no-op (fewer than two attributes).
    std::optional<WeightAdaptation> adaptWeights(AdaptationCase reason, CategoryId j,
                                                 CategoryId k);

    /// True when no shared action carries opposed non-neutral rewards.
    static bool mergeEligible(const ObjectCategory& a, const ObjectCategory& b);

    /// Rebuilds the whole similarity cache from the categories.
    void recomputeSimilarities();

    bool operator==(const KnowledgeGraph&) const = default;

    // Used by the document reader; bypasses the incremental bookkeeping.
    struct Snapshot {
        FeatureSchema schema;
        std::vector<std::string> actions;
        Parameters params;
        AttributeWeights weights;
        std::vector<ObjectCategory> categories;
        std::map<std::pair<CategoryId, CategoryId>, PairSimilarity> similarities;
        CategoryId nextId{};
        std::uint64_t seed = 0;
        std::string rngState;
    };
    static KnowledgeGraph fromSnapshot(Snapshot snapshot);

private:
    ObjectCategory& mutableCategory(CategoryId id);
    CategoryId addCategory(ObjectCategory c);
    void refreshPairs(CategoryId changed);
    void refreshValues();
    void mergeInto(CategoryId kept, CategoryId absorbed);
    void foldIntervals(std::vector<FeatureIntervalVector>& set) const;

    static std::pair<CategoryId, CategoryId> key(CategoryId a, CategoryId b) {
        return a < b ? std::pair{a, b} : std::pair{b, a};
    }

    FeatureSchema schema_;
    std::vector<std::string> actions_;
    Parameters params_;
    AttributeWeights weights_;
    std::map<CategoryId, ObjectCategory> categories_;
    std::map<std::pair<CategoryId, CategoryId>, PairSimilarity> similarities_;
    CategoryId nextId_{1};
    Rng rng_;
};

} // namespace catlearn::knowledge
