#include "catlearn/features/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "catlearn/knowledge/random.hpp"

namespace catlearn::features {

namespace {

double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

} // namespace

double Circle::area() const { return std::numbers::pi * radius * radius; }

bool Circle::contains(Point p) const {
    return dist(center, p) <= radius + 1e-9 * std::max(1.0, radius);
}

std::vector<Point> convexHull(std::vector<Point> points) {
    std::sort(points.begin(), points.end(),
              [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 3) return points;
    // Andrew's monotone chain.
    std::vector<Point> hull(2 * points.size());
    std::size_t k = 0;
    for (const auto& p : points) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    return hull;
}

OrientedBox minAreaRect(const std::vector<Point>& points) {
    if (points.empty()) throw FeatureError("no points");
    const auto hull = convexHull(points);
    const std::size_t h = hull.size();
    if (h == 1) return {hull[0], 0.0, 0.0, 0.0};
    if (h == 2) {
        const Point mid{(hull[0].x + hull[1].x) / 2, (hull[0].y + hull[1].y) / 2};
        return {mid, dist(hull[0], hull[1]), 0.0, std::atan2(hull[1].y - hull[0].y, hull[1].x - hull[0].x)};
    }

    auto at = [&](std::size_t i) { return hull[i % h]; };
    OrientedBox best;
    double bestArea = std::numeric_limits<double>::infinity();
    // Calipers: far = farthest from the edge, right/left = extremes along it.
    std::size_t far = 1, right = 1, left = 0;
    for (std::size_t i = 0; i < h; ++i) {
        const Point p = at(i);
        const Point q = at(i + 1);
        const double len = dist(p, q);
        const Point e{(q.x - p.x) / len, (q.y - p.y) / len};
        const Point n{-e.y, e.x};
        auto along = [&](std::size_t j) { return dot({at(j).x - p.x, at(j).y - p.y}, e); };
        auto across = [&](std::size_t j) { return dot({at(j).x - p.x, at(j).y - p.y}, n); };
        if (i == 0) far = right = 1;
        far = std::max(far, i + 1);
        right = std::max(right, i + 1);
        for (std::size_t steps = 0; steps < h && across(far + 1) > across(far); ++steps) ++far;
        for (std::size_t steps = 0; steps < h && along(right + 1) > along(right); ++steps) ++right;
        if (i == 0) left = far;
        left = std::max(left, far);
        for (std::size_t steps = 0; steps < h && along(left + 1) < along(left); ++steps) ++left;

        const double lo = along(left);
        const double hi = along(right);
        const double height = across(far);
        const double area = (hi - lo) * height;
        if (area < bestArea) {
            bestArea = area;
            const double mid = (lo + hi) / 2;
            best.center = {p.x + e.x * mid + n.x * height / 2, p.y + e.y * mid + n.y * height / 2};
            best.width = hi - lo;
            best.height = height;
            best.angle = std::atan2(e.y, e.x);
        }
    }
    return best;
}

Circle circleFrom(Point a, Point b) {
    return {{(a.x + b.x) / 2, (a.y + b.y) / 2}, dist(a, b) / 2};
}

Circle circleFrom(Point a, Point b, Point c) {
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2 * (bx * cy - by * cx);
    if (std::abs(d) < 1e-12) {
        // Collinear: the widest pair spans the others.
        Circle best = circleFrom(a, b);
        for (const auto& cand : {circleFrom(a, c), circleFrom(b, c)}) {
            if (cand.radius > best.radius) best = cand;
        }
        return best;
    }
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    const Point center{a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
    return {center, std::max({dist(center, a), dist(center, b), dist(center, c)})};
}

Circle minEnclosingCircle(std::vector<Point> points, std::uint64_t seed) {
    if (points.empty()) throw FeatureError("no points");
    knowledge::Rng rng(seed);
    for (std::size_t i = points.size(); i > 1; --i) std::swap(points[i - 1], points[rng.index(i)]);

    Circle c{points[0], 0.0};
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (c.contains(points[i])) continue;
        c = {points[i], 0.0};
        for (std::size_t j = 0; j < i; ++j) {
            if (c.contains(points[j])) continue;
            c = circleFrom(points[i], points[j]);
            for (std::size_t k = 0; k < j; ++k) {
                if (!c.contains(points[k])) c = circleFrom(points[i], points[j], points[k]);
            }
        }
    }
    return c;
}

std::vector<Point> traceContour(const SilhouetteStats& s) {
    // Moore-neighbour tracing, clockwise on screen, starting from the first
    // object pixel in raster order with the backtrack to its west.
    static constexpr int dx[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
    static constexpr int dy[8] = {0, -1, -1, -1, 0, 1, 1, 1};
    auto object = [&](long x, long y) {
        return x >= 0 && y >= 0 && x < static_cast<long>(s.width) && y < static_cast<long>(s.height) &&
               s.object(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    };
    auto direction = [](long fx, long fy, long tx, long ty) {
        for (int k = 0; k < 8; ++k) {
            if (fx + dx[k] == tx && fy + dy[k] == ty) return k;
        }
        return 0;
    };

    long sx = -1, sy = -1;
    for (std::size_t y = 0; y < s.height && sx < 0; ++y) {
        for (std::size_t x = 0; x < s.width; ++x) {
            if (s.object(x, y)) {
                sx = static_cast<long>(x);
                sy = static_cast<long>(y);
                break;
            }
        }
    }
    if (sx < 0) throw FeatureError("raster has no object pixels");

    std::vector<std::pair<long, long>> contour{{sx, sy}};
    long cx = sx, cy = sy, bx = sx - 1, by = sy;
    const std::size_t limit = 4 * s.width * s.height + 8;
    for (std::size_t guard = 0; guard < limit; ++guard) {
        const int from = direction(cx, cy, bx, by);
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            const int d = (from + k) % 8;
            if (object(cx + dx[d], cy + dy[d])) {
                found = d;
                break;
            }
        }
        if (found < 0) break; // isolated pixel
        const int back = (found + 7) % 8;
        const long nx = cx + dx[found], ny = cy + dy[found];
        if (cx == sx && cy == sy && contour.size() > 1 && contour[1] == std::pair{nx, ny}) break;
        bx = cx + dx[back];
        by = cy + dy[back];
        cx = nx;
        cy = ny;
        contour.emplace_back(cx, cy);
    }
    if (contour.size() > 1 && contour.back() == contour.front()) contour.pop_back();

    std::vector<Point> out;
    out.reserve(contour.size());
    for (const auto& [x, y] : contour) out.push_back({static_cast<double>(x), static_cast<double>(y)});
    return out;
}

double polygonArea(const std::vector<Point>& polygon) {
    double twice = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const auto& a = polygon[i];
        const auto& b = polygon[(i + 1) % polygon.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return std::abs(twice) / 2.0;
}

SilhouetteStats silhouette(const Raster& r) {
    SilhouetteStats s;
    s.width = r.width();
    s.height = r.height();
    s.axisBox = objectBounds(r);
    s.mask.resize(s.width * s.height);
    for (std::size_t y = 0; y < s.height; ++y) {
        for (std::size_t x = 0; x < s.width; ++x) {
            s.mask[y * s.width + x] = r.isObject(x, y);
            s.pixelCount += r.isObject(x, y);
        }
    }
    const auto contour = traceContour(s);
    s.objectArea = polygonArea(contour);
    const auto hull = convexHull(contour);
    s.orientedBoxArea = minAreaRect(hull).area();
    s.minCircleArea = minEnclosingCircle(hull).area();
    return s;
}

std::array<double, 2> shapeRatios(const SilhouetteStats& s) {
    if (!(s.objectArea > 0.0 && s.orientedBoxArea > 0.0 && s.minCircleArea > 0.0)) {
        throw FeatureError("degenerate silhouette");
    }
    return {s.objectArea / s.orientedBoxArea, s.objectArea / s.minCircleArea};
}

} // namespace catlearn::features
