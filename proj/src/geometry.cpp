#include "hsmcast/geometry.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace hsmcast {

namespace {
constexpr double kSqrt3 = 1.7320508075688772;
}

bool inside_hexagon(Point p, double radius) noexcept
{
    const double ax = std::abs(p.x);
    const double ay = std::abs(p.y);
    return ay <= kSqrt3 / 2.0 * radius && kSqrt3 * ax + ay <= kSqrt3 * radius;
}

CellLayout CellLayout::hexagonal(double radius_m, int num_neighbors)
{
    if (!(radius_m > 0.0)) throw std::invalid_argument("cell radius must be positive");
    if (num_neighbors < 0) throw std::invalid_argument("negative neighbour count");

    // Axial lattice coordinates; a vertex-on-x hexagon tiles with basis vectors
    // at 30 and 90 degrees.
    const double d = kSqrt3 * radius_m;
    const Point a1{d * kSqrt3 / 2.0, d / 2.0};
    const Point a2{0.0, d};

    CellLayout layout;
    layout.radius_ = radius_m;
    layout.sites_.push_back({0.0, 0.0});

    for (int ring = 1; static_cast<int>(layout.sites_.size()) - 1 < num_neighbors; ++ring) {
        // Six sides of length `ring`, starting from (0, -ring).
        static constexpr std::array<std::array<int, 2>, 6> dirs{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};
        int q = 0;
        int r = -ring;
        for (const auto& dir : dirs) {
            for (int step = 0; step < ring; ++step) {
                if (static_cast<int>(layout.sites_.size()) - 1 == num_neighbors) break;
                layout.sites_.push_back({q * a1.x + r * a2.x, q * a1.y + r * a2.y});
                q += dir[0];
                r += dir[1];
            }
        }
    }
    return layout;
}

}  // namespace hsmcast
