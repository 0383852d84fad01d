#include "catlearn/features/raster.hpp"

#include <cmath>

#include "catlearn/knowledge/random.hpp"

namespace catlearn::features {

Raster::Raster(std::size_t width, std::size_t height)
    : width_(width), height_(height), pixels_(width * height) {
    if (width == 0 || height == 0) throw FeatureError("raster must not be empty");
}

const std::optional<Chroma>& Raster::at(std::size_t x, std::size_t y) const {
    if (x >= width_ || y >= height_) throw FeatureError("pixel outside the raster");
    return pixels_[y * width_ + x];
}

void Raster::set(std::size_t x, std::size_t y, Chroma c) {
    if (x >= width_ || y >= height_) throw FeatureError("pixel outside the raster");
    pixels_[y * width_ + x] = c;
}

void Raster::clear(std::size_t x, std::size_t y) {
    if (x >= width_ || y >= height_) throw FeatureError("pixel outside the raster");
    pixels_[y * width_ + x].reset();
}

std::size_t Raster::objectPixelCount() const {
    std::size_t n = 0;
    for (const auto& p : pixels_) n += p.has_value();
    return n;
}

Raster renderObject(const ObjectSpec& spec, std::size_t rasterWidth, std::size_t rasterHeight) {
    Raster r(rasterWidth, rasterHeight);
    const double cx = spec.centerX.value_or(static_cast<double>(rasterWidth) / 2.0);
    const double cy = spec.centerY.value_or(static_cast<double>(rasterHeight) / 2.0);
    const double c = std::cos(spec.rotation);
    const double s = std::sin(spec.rotation);

    // Half extents of the shape's axis-aligned footprint.
    double hx = 0.0, hy = 0.0;
    if (spec.shape == Shape::Circle) {
        if (!(spec.radius > 0.0)) throw FeatureError("circle radius must be positive");
        hx = hy = spec.radius;
    } else {
        if (!(spec.width > 0.0 && spec.height > 0.0)) throw FeatureError("rect sides must be positive");
        hx = (std::abs(c) * spec.width + std::abs(s) * spec.height) / 2.0;
        hy = (std::abs(s) * spec.width + std::abs(c) * spec.height) / 2.0;
    }
    if (cx - hx < 0.0 || cy - hy < 0.0 || cx + hx > static_cast<double>(rasterWidth) ||
        cy + hy > static_cast<double>(rasterHeight)) {
        throw FeatureError("shape does not fit the raster");
    }

    knowledge::Rng rng(spec.seed);
    for (std::size_t y = 0; y < rasterHeight; ++y) {
        for (std::size_t x = 0; x < rasterWidth; ++x) {
            const double dx = static_cast<double>(x) + 0.5 - cx;
            const double dy = static_cast<double>(y) + 0.5 - cy;
            bool inside = false;
            if (spec.shape == Shape::Circle) {
                inside = dx * dx + dy * dy < spec.radius * spec.radius;
            } else {
                // Into the rect's frame.
                const double u = c * dx + s * dy;
                const double v = -s * dx + c * dy;
                inside = std::abs(u) < spec.width / 2.0 && std::abs(v) < spec.height / 2.0;
            }
            if (!inside) continue;
            Chroma px = spec.chroma;
            if (spec.chromaNoise > 0.0) {
                px.a += rng.uniform(-spec.chromaNoise, spec.chromaNoise);
                px.b += rng.uniform(-spec.chromaNoise, spec.chromaNoise);
            }
            r.set(x, y, px);
        }
    }
    if (r.objectPixelCount() == 0) throw FeatureError("shape covers no pixel center");
    return r;
}

PixelBox objectBounds(const Raster& r) {
    PixelBox box{r.width(), r.height(), 0, 0};
    bool any = false;
    for (std::size_t y = 0; y < r.height(); ++y) {
        for (std::size_t x = 0; x < r.width(); ++x) {
            if (!r.isObject(x, y)) continue;
            any = true;
            box.x0 = std::min(box.x0, x);
            box.y0 = std::min(box.y0, y);
            box.x1 = std::max(box.x1, x);
            box.y1 = std::max(box.y1, y);
        }
    }
    if (!any) throw FeatureError("raster has no object pixels");
    return box;
}

std::array<double, 8> quarterAverages(const Raster& r) {
    const auto box = objectBounds(r);
    const std::size_t splitX = box.x0 + (box.width() + 1) / 2;
    const std::size_t splitY = box.y0 + (box.height() + 1) / 2;
    std::array<double, 8> sums{};
    std::array<std::size_t, 4> counts{};
    for (std::size_t y = box.y0; y <= box.y1; ++y) {
        for (std::size_t x = box.x0; x <= box.x1; ++x) {
            const auto& p = r.at(x, y);
            if (!p) continue;
            const std::size_t q = (y < splitY ? 0 : 2) + (x < splitX ? 0 : 1);
            sums[2 * q] += p->a;
            sums[2 * q + 1] += p->b;
            ++counts[q];
        }
    }
    for (std::size_t q = 0; q < 4; ++q) {
        if (counts[q] == 0) continue;
        sums[2 * q] /= static_cast<double>(counts[q]);
        sums[2 * q + 1] /= static_cast<double>(counts[q]);
    }
    return sums;
}

} // namespace catlearn::features
