#pragma once

#include <cmath>

namespace cfmm {

struct Position2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Position2&, const Position2&) = default;
};

struct Position3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Position3&, const Position3&) = default;
};

inline double distance(const Position2& a, const Position2& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance(const Position3& a, const Position3& b)
{
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                     (a.z - b.z) * (a.z - b.z));
}

inline bool inside_square(double x, double y, double side)
{
    return x >= 0.0 && x <= side && y >= 0.0 && y <= side;
}

}  // namespace cfmm
