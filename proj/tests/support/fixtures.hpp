#pragma once

#include "catlearn/knowledge/graph.hpp"

namespace catlearn::testing {

namespace kn = catlearn::knowledge;

/// Color [red, green, yellow, brown] and form [circular, rectangular], the
/// characteristic order of the one-category example graph.
inline kn::FeatureSchema exampleGraphSchema() {
    return {{"color", {"red", "green", "yellow", "brown"}},
            {"form", {"circular", "rectangular"}}};
}

inline kn::FeatureIntervalVector intervals(std::initializer_list<std::pair<double, double>> b,
                                           std::uint64_t count) {
    kn::FeatureIntervalVector v;
    for (auto [lo, hi] : b) v.intervals.push_back({lo, hi});
    v.count = count;
    return v;
}

/// Category s_3: green seen once, 70 % red / 30 % brown seen twice, form
/// 0-20 % circular / 80-100 % rectangular, and Action1 rewarded positively.
inline kn::ObjectCategory categoryS3(kn::CategoryId id = kn::CategoryId{3}) {
    kn::ObjectCategory c;
    c.id = id;
    c.featureSets = {
        {intervals({{0, 0}, {1, 1}, {0, 0}, {0, 0}}, 1),
         intervals({{0.7, 0.7}, {0, 0}, {0, 0}, {0.3, 0.3}}, 2)},
        {intervals({{0, 0.2}, {0.8, 1}}, 3)},
    };
    c.experiences = {{0, kn::Reward::Positive}};
    return c;
}

inline kn::KnowledgeGraph exampleGraph(kn::Parameters params = {}) {
    kn::KnowledgeGraph::Snapshot s;
    s.schema = exampleGraphSchema();
    s.actions = {"Action1", "Action2"};
    s.params = params;
    s.weights = kn::AttributeWeights::initial(2);
    s.categories = {categoryS3()};
    s.nextId = kn::CategoryId{4};
    s.seed = 7;
    return kn::KnowledgeGraph::fromSnapshot(std::move(s));
}

inline kn::Percept percept(const kn::FeatureSchema& schema,
                           std::vector<std::vector<double>> values) {
    kn::Percept p;
    for (std::size_t f = 0; f < schema.size(); ++f) {
        p.features.push_back({schema[f].id, std::move(values[f])});
    }
    return p;
}

} // namespace catlearn::testing
