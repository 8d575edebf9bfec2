#pragma once

#include <cmath>
#include <vector>

namespace hsmcast {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Point a, Point b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

/// Hexagonal cell with a vertex on the positive x axis, centred on the origin.
bool inside_hexagon(Point p, double radius) noexcept;

/// Serving site at the origin plus rings of neighbouring sites on a hexagonal grid
/// (inter-site distance sqrt(3) * radius).
class CellLayout {
public:
    /// `num_neighbors` sites are taken ring by ring (6 in ring 1, 12 in ring 2, ...).
    static CellLayout hexagonal(double radius_m, int num_neighbors);

    double radius() const noexcept { return radius_; }
    Point serving_site() const noexcept { return sites_.front(); }
    /// All sites, serving first.
    const std::vector<Point>& sites() const noexcept { return sites_; }
    int num_neighbors() const noexcept { return static_cast<int>(sites_.size()) - 1; }

private:
    double radius_ = 0.0;
    std::vector<Point> sites_;
};

}  // namespace hsmcast
