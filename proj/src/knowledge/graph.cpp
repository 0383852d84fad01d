#include "catlearn/knowledge/graph.hpp"

#include <algorithm>
#include <set>

#include "catlearn/knowledge/similarity.hpp"

namespace catlearn::knowledge {

std::string_view toString(SelectionTier t) {
    switch (t) {
    case SelectionTier::Random: return "random";
    case SelectionTier::Positive: return "positive";
    case SelectionTier::Analogy: return "analogy";
    case SelectionTier::Untried: return "untried";
    case SelectionTier::Fallback: return "fallback";
    }
    return "random";
}

std::string_view toString(AdaptationCase c) {
    switch (c) {
    case AdaptationCase::Merged: return "merged";
    case AdaptationCase::Split: return "split";
    case AdaptationCase::ContradictingFirstExperience: return "contradictingFirstExperience";
    }
    return "merged";
}

std::string_view toString(RewardOutcomeKind k) {
    switch (k) {
    case RewardOutcomeKind::Updated: return "updated";
    case RewardOutcomeKind::Unchanged: return "unchanged";
    case RewardOutcomeKind::Split: return "split";
    }
    return "unchanged";
}

std::optional<MatchAssignment> fitsCategory(const Percept& p, const ObjectCategory& c) {
    if (p.features.size() != c.featureSets.size()) return std::nullopt;
    MatchAssignment assignment;
    assignment.reserve(p.features.size());
    for (std::size_t f = 0; f < p.features.size(); ++f) {
        const auto& values = p.features[f].values;
        const auto point = FeatureIntervalVector::fromPoint(values);
        std::optional<std::size_t> best;
        double bestDelta = 0.0;
        const auto& set = c.featureSets[f];
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (!set[i].contains(values)) continue;
            const double d = deltaDistance(set[i], point);
            if (!best || d < bestDelta) {
                best = i;
                bestDelta = d;
            }
        }
        if (!best) return std::nullopt;
        assignment.push_back(*best);
    }
    return assignment;
}

KnowledgeGraph::KnowledgeGraph(FeatureSchema schema, std::vector<std::string> actions,
                               Parameters params, std::uint64_t seed)
    : schema_(std::move(schema)),
      actions_(std::move(actions)),
      params_(params),
      weights_(AttributeWeights::initial(schema_.size())),
      rng_(seed) {
    params_.validate();
    if (schema_.empty()) throw ConfigError("feature schema is empty");
    std::set<std::string> ids;
    for (const auto& f : schema_) {
        if (f.id.empty()) throw ConfigError("feature id must not be empty");
        if (f.arity() == 0) throw ConfigError("feature '" + f.id + "' has no characteristics");
        if (!ids.insert(f.id).second) throw ConfigError("duplicate feature id '" + f.id + "'");
    }
    std::set<std::string> names;
    for (const auto& a : actions_) {
        if (a.empty()) throw ConfigError("action name must not be empty");
        if (!names.insert(a).second) throw ConfigError("duplicate action '" + a + "'");
    }
}

std::optional<ActionIndex> KnowledgeGraph::actionIndex(std::string_view name) const {
    for (std::size_t i = 0; i < actions_.size(); ++i) {
        if (actions_[i] == name) return i;
    }
    return std::nullopt;
}

const std::string& KnowledgeGraph::actionName(ActionIndex a) const {
    if (a >= actions_.size()) throw ContractViolation("action index out of range");
    return actions_[a];
}

const ObjectCategory& KnowledgeGraph::category(CategoryId id) const {
    auto it = categories_.find(id);
    if (it == categories_.end()) {
        throw ContractViolation("unknown category " + std::to_string(raw(id)));
    }
    return it->second;
}

ObjectCategory& KnowledgeGraph::mutableCategory(CategoryId id) {
    auto it = categories_.find(id);
    if (it == categories_.end()) {
        throw ContractViolation("unknown category " + std::to_string(raw(id)));
    }
    return it->second;
}

const PairSimilarity& KnowledgeGraph::pair(CategoryId a, CategoryId b) const {
    auto it = similarities_.find(key(a, b));
    if (it == similarities_.end()) {
        throw ContractViolation("no similarity cached for categories " +
                                std::to_string(raw(a)) + " and " + std::to_string(raw(b)));
    }
    return it->second;
}

double KnowledgeGraph::similarity(CategoryId a, CategoryId b) const {
    return pair(a, b).value;
}

std::optional<std::pair<CategoryId, MatchAssignment>>
KnowledgeGraph::classify(const Percept& p) const {
    validatePercept(schema_, p);
    for (auto it = categories_.rbegin(); it != categories_.rend(); ++it) {
        if (auto match = fitsCategory(p, it->second)) {
            return std::pair{it->first, std::move(*match)};
        }
    }
    return std::nullopt;
}

std::optional<CategoryId> KnowledgeGraph::mostSimilar(CategoryId c) const {
    std::optional<CategoryId> best;
    double bestValue = 0.0;
    for (const auto& [id, other] : categories_) {
        if (id == c) continue;
        const double s = similarity(c, id);
        if (!best || s > bestValue) {
            best = id;
            bestValue = s;
        }
    }
    return best;
}

CategoryId KnowledgeGraph::addCategory(ObjectCategory c) {
    const CategoryId id = nextId_;
    nextId_ = CategoryId{raw(nextId_) + 1};
    c.id = id;
    categories_.emplace(id, std::move(c));
    refreshPairs(id);
    return id;
}

void KnowledgeGraph::refreshPairs(CategoryId changed) {
    const auto& c = category(changed);
    for (const auto& [id, other] : categories_) {
        if (id == changed) continue;
        const auto k = key(changed, id);
        const auto& first = k.first == changed ? c : other;
        const auto& second = k.first == changed ? other : c;
        PairSimilarity ps;
        ps.attributes = attributeSimilarities(first, second);
        ps.value = weightedSimilarity(ps.attributes, weights_);
        similarities_[k] = std::move(ps);
    }
}

void KnowledgeGraph::refreshValues() {
    for (auto& [k, ps] : similarities_) ps.value = weightedSimilarity(ps.attributes, weights_);
}

void KnowledgeGraph::recomputeSimilarities() {
    similarities_.clear();
    for (auto it = categories_.begin(); it != categories_.end(); ++it) {
        for (auto jt = std::next(it); jt != categories_.end(); ++jt) {
            PairSimilarity ps;
            ps.attributes = attributeSimilarities(it->second, jt->second);
            ps.value = weightedSimilarity(ps.attributes, weights_);
            similarities_[{it->first, jt->first}] = std::move(ps);
        }
    }
}

Observation KnowledgeGraph::observe(const Percept& p) {
    validatePercept(schema_, p);
    if (auto match = classify(p)) {
        auto& c = mutableCategory(match->first);
        for (std::size_t f = 0; f < match->second.size(); ++f) {
            ++c.featureSets[f][match->second[f]].count;
        }
        refreshPairs(c.id);
        return {match->first, false, p, std::move(match->second)};
    }
    const CategoryId id = addCategory(categoryFromPercept(CategoryId{}, p));
    return {id, true, p, {}};
}

ActionChoice KnowledgeGraph::selectAction(CategoryId c) {
    if (actions_.empty()) throw ConfigError("action set is empty");
    const auto& current = category(c);

    if (params_.rhoRa > 0.0 && rng_.uniform() < params_.rhoRa) {
        return {rng_.index(actions_.size()), SelectionTier::Random, std::nullopt};
    }

    for (const auto& [a, r] : current.experiences) {
        if (r == Reward::Positive) return {a, SelectionTier::Positive, std::nullopt};
    }

    auto negativeIn = [](const ObjectCategory& cat, ActionIndex a) {
        auto it = cat.experiences.find(a);
        return it != cat.experiences.end() && it->second == Reward::Negative;
    };

    if (const auto nearest = mostSimilar(c)) {
        const auto& nearestCat = category(*nearest);
        std::vector<std::pair<double, CategoryId>> ranked;
        for (const auto& [id, other] : categories_) {
            if (id == c) continue;
            const double s = similarity(c, id);
            if (s > 0.0) ranked.emplace_back(s, id);
        }
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& x, const auto& y) { return x.first > y.first; });
        for (const auto& [s, id] : ranked) {
            for (const auto& [a, r] : category(id).experiences) {
                if (r != Reward::Positive) continue;
                if (negativeIn(current, a) || negativeIn(nearestCat, a)) continue;
                return {a, SelectionTier::Analogy, id};
            }
        }
    }

    std::vector<ActionIndex> untried;
    for (ActionIndex a = 0; a < actions_.size(); ++a) {
        if (!negativeIn(current, a)) untried.push_back(a);
    }
    if (!untried.empty()) {
        return {untried[rng_.index(untried.size())], SelectionTier::Untried, std::nullopt};
    }
    return {rng_.index(actions_.size()), SelectionTier::Fallback, std::nullopt};
}

RewardOutcome KnowledgeGraph::recordReward(const Observation& obs, ActionIndex action,
                                           Reward reward) {
    if (!contains(obs.category)) {
        throw ContractViolation("reward for unknown category " +
                                std::to_string(raw(obs.category)));
    }
    if (action >= actions_.size()) throw ContractViolation("action index out of range");

    RewardOutcome outcome;
    auto& c = mutableCategory(obs.category);
    auto stored = c.experiences.find(action);

    if (stored == c.experiences.end()) {
        // The reference is judged on the similarity that led to the choice.
        std::optional<CategoryId> reference;
        if (auto nearest = mostSimilar(c.id); nearest && similarity(c.id, *nearest) > 0.0) {
            reference = nearest;
        }
        if (reference) {
            const auto& ref = category(*reference);
            auto it = ref.experiences.find(action);
            if (it != ref.experiences.end() && opposed(it->second, reward)) {
                if (auto adapted = adaptWeights(AdaptationCase::ContradictingFirstExperience,
                                                c.id, *reference)) {
                    outcome.adaptations.push_back(*adapted);
                }
            }
        }
        c.experiences.emplace(action, reward);
        refreshPairs(c.id);
        outcome.kind = RewardOutcomeKind::Updated;
    } else if (stored->second == reward) {
        outcome.kind = RewardOutcomeKind::Unchanged;
    } else if (stored->second == Reward::Neutral || reward == Reward::Neutral) {
        if (reward != Reward::Neutral) {
            stored->second = reward;
            refreshPairs(c.id);
            outcome.kind = RewardOutcomeKind::Updated;
        } else {
            outcome.kind = RewardOutcomeKind::Unchanged;
        }
    } else {
        // Opposed rewards: the object is split off into its own category.
        if (!obs.isNew) {
            if (obs.matched.size() != c.featureSets.size()) {
                throw ContractViolation("observation does not match its category");
            }
            for (std::size_t f = 0; f < obs.matched.size(); ++f) {
                auto& v = c.featureSets[f].at(obs.matched[f]);
                if (v.count < 2) throw ContractViolation("observation was already rolled back");
                --v.count;
            }
            refreshPairs(c.id);
        }
        const CategoryId from = c.id;
        auto fresh = categoryFromPercept(CategoryId{}, obs.percept);
        fresh.experiences.emplace(action, reward);
        const CategoryId created = addCategory(std::move(fresh));
        if (auto adapted = adaptWeights(AdaptationCase::Split, from, created)) {
            outcome.adaptations.push_back(*adapted);
        }
        outcome.kind = RewardOutcomeKind::Split;
        outcome.split = SplitEvent{from, created};
    }

    outcome.merges = mergePass(&outcome.adaptations);
    return outcome;
}

bool KnowledgeGraph::mergeEligible(const ObjectCategory& a, const ObjectCategory& b) {
    for (const auto& [action, r] : a.experiences) {
        auto it = b.experiences.find(action);
        if (it != b.experiences.end() && opposed(r, it->second)) return false;
    }
    return true;
}

std::vector<MergeEvent> KnowledgeGraph::mergePass(std::vector<WeightAdaptation>* adaptations) {
    std::vector<MergeEvent> events;
    for (;;) {
        std::optional<std::pair<CategoryId, CategoryId>> best;
        double bestValue = 0.0;
        for (const auto& [k, ps] : similarities_) {
            if (ps.value < params_.thetaMc) continue;
            if (best && ps.value <= bestValue) continue;
            if (!mergeEligible(category(k.first), category(k.second))) continue;
            best = k;
            bestValue = ps.value;
        }
        if (!best) break;

        if (auto adapted = adaptWeights(AdaptationCase::Merged, best->first, best->second)) {
            if (adaptations) adaptations->push_back(*adapted);
        }
        mergeInto(best->second, best->first);
        events.push_back({best->second, best->first, bestValue});
    }
    return events;
}

void KnowledgeGraph::foldIntervals(std::vector<FeatureIntervalVector>& set) const {
    for (;;) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        double bestDelta = 0.0;
        for (std::size_t p = 0; p < set.size(); ++p) {
            for (std::size_t q = p + 1; q < set.size(); ++q) {
                const double d = deltaDistance(set[p], set[q]);
                if (d > params_.thetaMf + kIntervalEpsilon) continue;
                if (!best || d < bestDelta) {
                    best = {p, q};
                    bestDelta = d;
                }
            }
        }
        if (!best) return;
        auto& into = set[best->first];
        const auto& from = set[best->second];
        for (std::size_t i = 0; i < into.intervals.size(); ++i) {
            into.intervals[i].lo = std::min(into.intervals[i].lo, from.intervals[i].lo);
            into.intervals[i].hi = std::max(into.intervals[i].hi, from.intervals[i].hi);
        }
        into.count += from.count;
        set.erase(set.begin() + static_cast<std::ptrdiff_t>(best->second));
    }
}

void KnowledgeGraph::mergeInto(CategoryId kept, CategoryId absorbed) {
    auto node = categories_.extract(absorbed);
    if (node.empty()) throw ContractViolation("merge of unknown category");
    ObjectCategory& from = node.mapped();
    auto& into = mutableCategory(kept);

    for (std::size_t f = 0; f < into.featureSets.size(); ++f) {
        auto& set = into.featureSets[f];
        set.insert(set.end(), from.featureSets[f].begin(), from.featureSets[f].end());
        foldIntervals(set);
    }
    for (const auto& [action, r] : from.experiences) {
        auto [it, inserted] = into.experiences.emplace(action, r);
        if (!inserted && it->second == Reward::Neutral) it->second = r;
    }

    for (auto it = similarities_.begin(); it != similarities_.end();) {
        if (it->first.first == absorbed || it->first.second == absorbed) {
            it = similarities_.erase(it);
        } else {
            ++it;
        }
    }
    refreshPairs(kept);
}

std::optional<WeightAdaptation> KnowledgeGraph::adaptWeights(AdaptationCase reason,
                                                            CategoryId j, CategoryId k) {
    if (j == k) throw ContractViolation("weight adaptation needs two distinct categories");
    const std::size_t n = weights_.attributeCount();
    if (n < 2) return std::nullopt;

    const auto& attrs = pair(j, k).attributes;
    std::size_t target = 0;
    if (reason == AdaptationCase::Merged) {
        for (std::size_t i = 1; i < n; ++i) {
            if (attrs[i] < attrs[target]) target = i;
        }
    } else {
        for (std::size_t i = 1; i < n; ++i) {
            if (weights_.at(i) * attrs[i] > weights_.at(target) * attrs[target]) target = i;
        }
    }

    const double d = std::min(params_.deltaAw, weights_.at(target));
    if (d > 0.0) {
        weights_.at(target) -= d;
        const double share = d / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (i != target) weights_.at(i) += share;
        }
        refreshValues();
    }
    return WeightAdaptation{reason, j, k, target, d};
}

KnowledgeGraph KnowledgeGraph::fromSnapshot(Snapshot s) {
    KnowledgeGraph g(std::move(s.schema), std::move(s.actions), s.params, s.seed);
    if (s.weights.features.size() != g.schema_.size()) {
        throw ConfigError("weight count does not match the feature schema");
    }
    g.weights_ = std::move(s.weights);
    for (auto& c : s.categories) {
        if (c.featureSets.size() != g.schema_.size()) {
            throw ConfigError("category " + std::to_string(raw(c.id)) +
                              " does not cover the feature schema");
        }
        for (std::size_t f = 0; f < c.featureSets.size(); ++f) {
            if (c.featureSets[f].empty()) {
                throw ConfigError("category " + std::to_string(raw(c.id)) +
                                  " has no interval vectors for feature '" +
                                  g.schema_[f].id + "'");
            }
            for (const auto& v : c.featureSets[f]) {
                if (v.arity() != g.schema_[f].arity() || v.count == 0) {
                    throw ConfigError("malformed interval vector in category " +
                                      std::to_string(raw(c.id)));
                }
            }
        }
        for (const auto& [a, r] : c.experiences) {
            if (a >= g.actions_.size()) throw ConfigError("experience references unknown action");
        }
        const CategoryId id = c.id;
        if (!g.categories_.emplace(id, std::move(c)).second) {
            throw ConfigError("duplicate category id " + std::to_string(raw(id)));
        }
    }
    if (!g.categories_.empty() && raw(s.nextId) <= raw(g.categories_.rbegin()->first)) {
        throw ConfigError("nextCategoryId must exceed every category id");
    }
    g.nextId_ = s.nextId;
    if (s.similarities.empty() && g.categories_.size() > 1) {
        g.recomputeSimilarities();
    } else {
        g.similarities_ = std::move(s.similarities);
        const std::size_t n = g.categories_.size();
        if (g.similarities_.size() != n * (n - (n > 0 ? 1 : 0)) / 2) {
            throw ConfigError("similarity cache does not cover every category pair");
        }
        for (const auto& [k, ps] : g.similarities_) {
            if (!g.contains(k.first) || !g.contains(k.second) || !(k.first < k.second) ||
                ps.attributes.size() != g.attributeCount()) {
                throw ConfigError("malformed similarity cache entry");
            }
        }
    }
    if (!s.rngState.empty()) g.rng_.restore(s.seed, s.rngState);
    return g;
}

} // namespace catlearn::knowledge
