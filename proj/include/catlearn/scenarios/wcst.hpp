#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "catlearn/knowledge/graph.hpp"
#include "catlearn/knowledge/random.hpp"

namespace catlearn::scenarios {

namespace kn = catlearn::knowledge;

enum class CardColor { Red, Green, Yellow, Blue };
enum class CardForm { Triangle, Star, Cross, Circle };
enum class SortingRule { Color, Form, Number };

std::string_view toString(CardColor c);
std::string_view toString(CardForm f);
std::string_view toString(SortingRule r);

struct WcstCard {
    CardColor color = CardColor::Red;
    CardForm form = CardForm::Triangle;
    int number = 1; ///< 1..4

    std::string label() const; ///< e.g. "2-green-star"
    bool operator==(const WcstCard&) const = default;
};

/// Stimulus card above pile 1..4: one red triangle, two green stars, three
/// yellow crosses, four blue circles.
WcstCard stimulusCard(int pile);

inline constexpr std::size_t kDeckSize = 60;
inline constexpr int kRunLength = 5;
inline constexpr int kRunsToComplete = 9;

/// The 64 color x form x number combinations minus the four stimulus cards,
/// shuffled with the seed.
std::vector<WcstCard> wcstDeck(std::uint64_t seed);
std::vector<WcstCard> wcstDeck(kn::Rng& rng);

/// Features color, form and number, four characteristics each.
kn::FeatureSchema wcstSchema();
/// pile1 .. pile4.
std::vector<std::string> wcstActions();

/// Three unit vectors.
kn::Percept wcstPercept(const WcstCard& card);

struct WcstState {
    SortingRule activeRule = SortingRule::Color;
    int consecutiveCorrect = 0;
    int completedRuns = 0;
    std::uint64_t presented = 0;

    bool complete() const { return completedRuns >= kRunsToComplete; }
    bool operator==(const WcstState&) const = default;
};

class WcstComplete : public std::logic_error {
public:
    WcstComplete() : std::logic_error("the card sorting test is already complete") {}
};

struct WcstStep {
    kn::Reward reward = kn::Reward::Negative;
    WcstState next;
    bool runCompleted = false; ///< the fifth correct assignment in a row
};

/// Scores placing `card` on `pile` (1..4) under the active rule; the fifth
/// consecutive correct placement completes a run and advances the rule
/// color -> form -> number -> color.
WcstStep wcstOracle(const WcstState& state, const WcstCard& card, int pile);

SortingRule nextRule(SortingRule r);

/// Which of the four piles is correct for `card` under `rule`.
int correctPile(const WcstCard& card, SortingRule rule);

/// Deals cards, reshuffling a fresh deck whenever the current one runs out.
class WcstDealer {
public:
    explicit WcstDealer(std::uint64_t seed);
    WcstCard next();

private:
    kn::Rng rng_;
    std::vector<WcstCard> deck_;
    std::size_t position_ = 0;
};

} // namespace catlearn::scenarios
