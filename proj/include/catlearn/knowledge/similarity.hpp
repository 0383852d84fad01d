#pragma once

#include <span>
#include <vector>

#include "catlearn/knowledge/types.hpp"

namespace catlearn::knowledge {

/// Sum over characteristics of the gap between corresponding intervals.
/// Lies in [0, 2] for percentage intervals. Throws ContractViolation on an
/// arity mismatch.
double deltaDistance(const FeatureIntervalVector& a, const FeatureIntervalVector& b);

/// Weighted best-match similarity of two interval-vector sets of one feature:
///
///   sum_{c_j in C_j} max_{c_k in C_k} (1 - delta(c_j, c_k)) * P(c_j) * P(c_k)
///
/// where C_j is the smaller set. Sets of equal size are evaluated in both
/// orientations and averaged so the result never depends on argument order.
double featureSimilarity(std::span<const FeatureIntervalVector> a,
                         std::span<const FeatureIntervalVector> b);

double featureSimilarity(const ObjectCategory& j, const ObjectCategory& k,
                         std::size_t feature);

/// Signed agreement over the union of experienced actions: +1 for equal
/// non-neutral rewards, -1 for opposed ones, 0 otherwise, divided by the
/// union size. 0 when neither category has experiences.
double experienceSimilarity(const ObjectCategory& j, const ObjectCategory& k);

/// Per-attribute similarities: one per feature, experience last.
std::vector<double> attributeSimilarities(const ObjectCategory& j,
                                          const ObjectCategory& k);

/// Weighted sum of attribute similarities.
double weightedSimilarity(std::span<const double> attributes,
                          const AttributeWeights& w);

double categorySimilarity(const ObjectCategory& j, const ObjectCategory& k,
                          const AttributeWeights& w);

} // namespace catlearn::knowledge
