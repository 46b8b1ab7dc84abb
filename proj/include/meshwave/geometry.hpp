#pragma once

#include <cmath>
#include <stdexcept>

namespace meshwave {

struct Vec2 {
    double x = 0.0;
    double z = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, z + o.z}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, z - o.z}; }
    Vec2 operator*(double s) const { return {x * s, z * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && z == o.z; }

    double norm2() const { return x * x + z * z; }
    double norm() const { return std::sqrt(norm2()); }
};

inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }
inline double dist2(const Vec2& a, const Vec2& b) { return (a - b).norm2(); }

/// Axis-aligned rectangular domain. z grows downward; the top edge
/// (z = z_min) is the free surface.
struct Rect {
    double x_min = 0.0;
    double x_max = 0.0;
    double z_min = 0.0;
    double z_max = 0.0;

    Rect() = default;
    Rect(double x0, double x1, double z0, double z1)
        : x_min(x0), x_max(x1), z_min(z0), z_max(z1) {
        if (!(x_min < x_max) || !(z_min < z_max))
            throw std::invalid_argument("Rect: degenerate extents");
    }

    bool operator==(const Rect&) const = default;

    double width() const { return x_max - x_min; }
    double depth() const { return z_max - z_min; }

    bool contains(const Vec2& p) const {
        return p.x >= x_min && p.x <= x_max && p.z >= z_min && p.z <= z_max;
    }

    bool on_edge(const Vec2& p, double tol = 0.0) const {
        if (!contains(p)) return false;
        return p.x - x_min <= tol || x_max - p.x <= tol ||
               p.z - z_min <= tol || z_max - p.z <= tol;
    }
};

}  // namespace meshwave
