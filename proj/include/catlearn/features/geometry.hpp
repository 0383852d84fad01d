#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "catlearn/features/raster.hpp"

namespace catlearn::features {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

struct Circle {
    Point center;
    double radius = 0.0;

    double area() const;
    /// Containment with a small relative tolerance.
    bool contains(Point p) const;
};

struct OrientedBox {
    Point center;
    double width = 0.0;  ///< along `angle`
    double height = 0.0;
    double angle = 0.0; ///< radians

    double area() const { return width * height; }
};

/// Counter-clockwise hull without collinear or repeated points.
std::vector<Point> convexHull(std::vector<Point> points);

/// Smallest-area enclosing rectangle. One side always lies on a hull edge,
/// so rotating calipers over the hull edges find it in linear time.
OrientedBox minAreaRect(const std::vector<Point>& points);

/// Smallest enclosing circle, randomized incremental construction. The
/// shuffle is seeded, so the result is reproducible.
Circle minEnclosingCircle(std::vector<Point> points, std::uint64_t seed = 0);

/// Circle through two points as a diameter, or through three points.
Circle circleFrom(Point a, Point b);
Circle circleFrom(Point a, Point b, Point c);

struct SilhouetteStats {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<bool> mask; ///< row-major, true for object pixels
    PixelBox axisBox;
    double orientedBoxArea = 0.0;
    double minCircleArea = 0.0;
    double objectArea = 0.0; ///< area enclosed by the outer contour
    std::size_t pixelCount = 0;

    bool object(std::size_t x, std::size_t y) const { return mask[y * width + x]; }
};

/// Outer boundary of the mask as the polygon through the centers of its
/// boundary pixels (8-connected tracing), starting at the first object
/// pixel in raster order.
std::vector<Point> traceContour(const SilhouetteStats& s);

/// Shoelace area, orientation ignored.
double polygonArea(const std::vector<Point>& polygon);

/// Object, box and circle areas all refer to pixel centers: the object area
/// is the area inside the traced contour, the box and circle enclose it.
/// A single pixel or a one-pixel-wide line therefore has zero area.
SilhouetteStats silhouette(const Raster& r);

/// (objectArea / orientedBoxArea, objectArea / minCircleArea).
std::array<double, 2> shapeRatios(const SilhouetteStats& s);

} // namespace catlearn::features
