#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace catlearn::features {

/// Bad input to the feature pipeline (empty mask, shape off the raster,
/// dimension mismatch...).
class FeatureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Opponent-color pair of an object pixel. Luminance is not modelled.
struct Chroma {
    double a = 0.0;
    double b = 0.0;

    bool operator==(const Chroma&) const = default;
};

/// Row-major pixel grid; background pixels hold no chroma.
class Raster {
public:
    Raster(std::size_t width, std::size_t height);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }

    const std::optional<Chroma>& at(std::size_t x, std::size_t y) const;
    void set(std::size_t x, std::size_t y, Chroma c);
    void clear(std::size_t x, std::size_t y);
    bool isObject(std::size_t x, std::size_t y) const { return at(x, y).has_value(); }
    std::size_t objectPixelCount() const;

    bool operator==(const Raster&) const = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::optional<Chroma>> pixels_;
};

enum class Shape { Rect, Circle };

/// A synthetic object. Rects use width x height, circles use radius; the
/// center defaults to the raster center. `chromaNoise` is the half-width of
/// the uniform per-pixel perturbation of both channels.
struct ObjectSpec {
    Shape shape = Shape::Rect;
    Chroma chroma;
    double width = 10.0;
    double height = 10.0;
    double radius = 5.0;
    double rotation = 0.0; ///< radians, counter-clockwise
    std::optional<double> centerX;
    std::optional<double> centerY;
    double chromaNoise = 0.0;
    std::uint64_t seed = 0;
};

/// A pixel belongs to the object when its center lies strictly inside the
/// shape. Throws FeatureError when the shape does not fit the raster.
Raster renderObject(const ObjectSpec& spec, std::size_t rasterWidth, std::size_t rasterHeight);

/// Inclusive pixel bounds of the object mask.
struct PixelBox {
    std::size_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    std::size_t width() const { return x1 - x0 + 1; }
    std::size_t height() const { return y1 - y0 + 1; }
    bool operator==(const PixelBox&) const = default;
};

/// Throws FeatureError for a raster without object pixels.
PixelBox objectBounds(const Raster& r);

/// Mean a and b over the object pixels of each bounding-box quarter, ordered
/// upper-left, upper-right, lower-left, lower-right as [a, b] pairs. On odd
/// extents the middle row or column belongs to the upper or left half. A
/// quarter without object pixels yields 0 for both channels.
std::array<double, 8> quarterAverages(const Raster& r);

} // namespace catlearn::features
