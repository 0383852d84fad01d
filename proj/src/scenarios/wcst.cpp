#include "catlearn/scenarios/wcst.hpp"

namespace catlearn::scenarios {

namespace {

constexpr CardColor kColors[] = {CardColor::Red, CardColor::Green, CardColor::Yellow, CardColor::Blue};
constexpr CardForm kForms[] = {CardForm::Triangle, CardForm::Star, CardForm::Cross, CardForm::Circle};

void checkPile(int pile) {
    if (pile < 1 || pile > 4) throw kn::ContractViolation("pile must be 1..4, got " + std::to_string(pile));
}

std::vector<double> unit(std::size_t hot) {
    std::vector<double> v(4, 0.0);
    v[hot] = 1.0;
    return v;
}

} // namespace

std::string_view toString(CardColor c) {
    switch (c) {
    case CardColor::Red: return "red";
    case CardColor::Green: return "green";
    case CardColor::Yellow: return "yellow";
    case CardColor::Blue: return "blue";
    }
    return "?";
}

std::string_view toString(CardForm f) {
    switch (f) {
    case CardForm::Triangle: return "triangle";
    case CardForm::Star: return "star";
    case CardForm::Cross: return "cross";
    case CardForm::Circle: return "circle";
    }
    return "?";
}

std::string_view toString(SortingRule r) {
    switch (r) {
    case SortingRule::Color: return "color";
    case SortingRule::Form: return "form";
    case SortingRule::Number: return "number";
    }
    return "?";
}

std::string WcstCard::label() const {
    return std::to_string(number) + "-" + std::string(toString(color)) + "-" + std::string(toString(form));
}

WcstCard stimulusCard(int pile) {
    checkPile(pile);
    const auto i = static_cast<std::size_t>(pile - 1);
    return {kColors[i], kForms[i], pile};
}

std::vector<WcstCard> wcstDeck(kn::Rng& rng) {
    std::vector<WcstCard> deck;
    deck.reserve(kDeckSize);
    for (auto c : kColors) {
        for (auto f : kForms) {
            for (int n = 1; n <= 4; ++n) {
                const WcstCard card{c, f, n};
                if (card == stimulusCard(n)) continue;
                deck.push_back(card);
            }
        }
    }
    for (std::size_t i = deck.size() - 1; i > 0; --i) std::swap(deck[i], deck[rng.index(i + 1)]);
    return deck;
}

std::vector<WcstCard> wcstDeck(std::uint64_t seed) {
    kn::Rng rng(seed);
    return wcstDeck(rng);
}

kn::FeatureSchema wcstSchema() {
    return {{"color", {"red", "green", "yellow", "blue"}},
            {"form", {"triangle", "star", "cross", "circle"}},
            {"number", {"1", "2", "3", "4"}}};
}

std::vector<std::string> wcstActions() { return {"pile1", "pile2", "pile3", "pile4"}; }

kn::Percept wcstPercept(const WcstCard& card) {
    if (card.number < 1 || card.number > 4) throw kn::ContractViolation("card number must be 1..4");
    kn::Percept p;
    p.features.push_back({"color", unit(static_cast<std::size_t>(card.color))});
    p.features.push_back({"form", unit(static_cast<std::size_t>(card.form))});
    p.features.push_back({"number", unit(static_cast<std::size_t>(card.number - 1))});
    return p;
}

SortingRule nextRule(SortingRule r) {
    switch (r) {
    case SortingRule::Color: return SortingRule::Form;
    case SortingRule::Form: return SortingRule::Number;
    case SortingRule::Number: return SortingRule::Color;
    }
    return SortingRule::Color;
}

int correctPile(const WcstCard& card, SortingRule rule) {
    switch (rule) {
    case SortingRule::Color: return static_cast<int>(card.color) + 1;
    case SortingRule::Form: return static_cast<int>(card.form) + 1;
    case SortingRule::Number: return card.number;
    }
    return 1;
}

WcstStep wcstOracle(const WcstState& state, const WcstCard& card, int pile) {
    if (state.complete()) throw WcstComplete();
    checkPile(pile);
    WcstStep step;
    step.next = state;
    step.next.presented += 1;
    if (correctPile(card, state.activeRule) != pile) {
        step.reward = kn::Reward::Negative;
        step.next.consecutiveCorrect = 0;
        return step;
    }
    step.reward = kn::Reward::Positive;
    step.next.consecutiveCorrect += 1;
    if (step.next.consecutiveCorrect == kRunLength) {
        step.runCompleted = true;
        step.next.consecutiveCorrect = 0;
        step.next.completedRuns += 1;
        step.next.activeRule = nextRule(state.activeRule);
    }
    return step;
}

WcstDealer::WcstDealer(std::uint64_t seed) : rng_(seed), deck_(wcstDeck(rng_)) {}

WcstCard WcstDealer::next() {
    if (position_ == deck_.size()) {
        deck_ = wcstDeck(rng_);
        position_ = 0;
    }
    return deck_[position_++];
}

} // namespace catlearn::scenarios
