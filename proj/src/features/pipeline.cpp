#include "catlearn/features/pipeline.hpp"

#include <numbers>

namespace catlearn::features {

namespace {

constexpr double kChromaScale = 100.0;

} // namespace

std::vector<double> colorInput(const Raster& r) {
    const auto q = quarterAverages(r);
    std::vector<double> out(q.begin(), q.end());
    for (auto& v : out) v /= kChromaScale;
    return out;
}

std::vector<double> shapeInput(const Raster& r) {
    const auto ratios = shapeRatios(silhouette(r));
    return {ratios[0], ratios[1]};
}

Raster syntheticObject(std::size_t colorClass, Shape shape, knowledge::Rng& rng) {
    if (colorClass >= kColorClasses) throw FeatureError("unknown color class");
    ObjectSpec spec;
    spec.shape = shape;
    spec.chroma = kColorPrototypes[colorClass];
    spec.chroma.a += rng.uniform(-8.0, 8.0);
    spec.chroma.b += rng.uniform(-8.0, 8.0);
    spec.chromaNoise = 6.0;
    const double half = static_cast<double>(kSyntheticRasterSize) / 2.0;
    spec.centerX = half + rng.uniform(-4.0, 4.0);
    spec.centerY = half + rng.uniform(-4.0, 4.0);
    if (shape == Shape::Circle) {
        spec.radius = rng.uniform(8.0, 16.0);
    } else {
        spec.width = rng.uniform(14.0, 26.0);
        spec.height = spec.width * rng.uniform(1.0, 1.5);
        spec.rotation = rng.uniform(0.0, std::numbers::pi / 2.0);
    }
    spec.seed = rng.next();
    return renderObject(spec, kSyntheticRasterSize, kSyntheticRasterSize);
}

Dataset colorDataset(std::size_t perClass, std::uint64_t seed) {
    knowledge::Rng rng(seed);
    Dataset d{8, kColorClasses, {}};
    for (std::size_t c = 0; c < kColorClasses; ++c) {
        for (std::size_t i = 0; i < perClass; ++i) {
            const Shape shape = i % 2 ? Shape::Circle : Shape::Rect;
            d.samples.push_back({colorInput(syntheticObject(c, shape, rng)), c});
        }
    }
    return d;
}

Dataset shapeDataset(std::size_t perClass, std::uint64_t seed) {
    knowledge::Rng rng(seed);
    Dataset d{2, kShapeClasses, {}};
    for (std::size_t c = 0; c < kShapeClasses; ++c) {
        for (std::size_t i = 0; i < perClass; ++i) {
            const Shape shape = c == 0 ? Shape::Rect : Shape::Circle;
            d.samples.push_back({shapeInput(syntheticObject(rng.index(kColorClasses), shape, rng)), c});
        }
    }
    return d;
}

knowledge::Percept perceive(const Raster& r, const Mlp& colorNet, const Mlp& shapeNet) {
    knowledge::Percept p;
    p.features.push_back(classify(colorNet, colorInput(r), "color"));
    p.features.push_back(classify(shapeNet, shapeInput(r), "form"));
    return p;
}

} // namespace catlearn::features
