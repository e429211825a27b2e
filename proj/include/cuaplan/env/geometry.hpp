#pragma once

#include <algorithm>
#include <cmath>

namespace cuaplan::env {

// Normalized screen fraction, origin top-left.
struct Coord {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Coord&) const = default;
    bool in_unit_square() const { return x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0; }
};

struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    bool operator==(const Rect&) const = default;

    bool contains(Coord c) const { return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1; }
    bool contains(const Rect& r) const {
        return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
    }
    bool overlaps(const Rect& r) const { return x0 < r.x1 && r.x0 < x1 && y0 < r.y1 && r.y0 < y1; }
    bool valid() const { return x0 >= 0 && y0 >= 0 && x1 <= 1 && y1 <= 1 && x0 <= x1 && y0 <= y1; }
    Coord center() const { return {(x0 + x1) / 2.0, (y0 + y1) / 2.0}; }

    // Euclidean gap between a point and this box (0 inside).
    double distance_to(Coord c) const {
        double dx = std::max({x0 - c.x, 0.0, c.x - x1});
        double dy = std::max({y0 - c.y, 0.0, c.y - y1});
        return std::hypot(dx, dy);
    }
    // Gap between two boxes (0 when they touch or overlap).
    double distance_to(const Rect& r) const {
        double dx = std::max({x0 - r.x1, 0.0, r.x0 - x1});
        double dy = std::max({y0 - r.y1, 0.0, r.y0 - y1});
        return std::hypot(dx, dy);
    }
};

}  // namespace cuaplan::env
