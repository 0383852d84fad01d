#pragma once

#include <array>
#include <cstdint>

#include "catlearn/features/geometry.hpp"
#include "catlearn/features/mlp.hpp"
#include "catlearn/features/raster.hpp"
#include "catlearn/knowledge/random.hpp"
#include "catlearn/knowledge/types.hpp"

namespace catlearn::features {

/// Nominal chroma of the color classes, in the order red, green, yellow,
/// brown (the order of the sorting scenario's color feature).
inline constexpr std::array<Chroma, 4> kColorPrototypes{
    Chroma{55.0, 40.0}, Chroma{-45.0, 45.0}, Chroma{-5.0, 80.0}, Chroma{20.0, 25.0}};

inline constexpr std::size_t kColorClasses = 4;
/// rectangular, circular.
inline constexpr std::size_t kShapeClasses = 2;
inline constexpr std::size_t kSyntheticRasterSize = 64;

/// Quarter averages scaled to roughly unit range.
std::vector<double> colorInput(const Raster& r);
/// shapeRatios of the silhouette.
std::vector<double> shapeInput(const Raster& r);

/// A desk-scale object: blocks are rotated rectangles, apples are disks.
/// Size, placement, rotation, object tint and pixel noise are drawn from
/// `rng`.
Raster syntheticObject(std::size_t colorClass, Shape shape, knowledge::Rng& rng);

/// `perClass` samples per class, labels in class order, shapes mixed.
Dataset colorDataset(std::size_t perClass, std::uint64_t seed);
Dataset shapeDataset(std::size_t perClass, std::uint64_t seed);

/// The learner's view of a raster: color and form percentages.
knowledge::Percept perceive(const Raster& r, const Mlp& colorNet, const Mlp& shapeNet);

} // namespace catlearn::features
