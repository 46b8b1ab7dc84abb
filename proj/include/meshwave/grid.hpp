#pragma once

#include <cstddef>

#include "meshwave/geometry.hpp"

namespace meshwave {

/// Uniform reference grid; index (i,j) maps to origin + (i*h, j*h), row-major
/// with j (depth) as the slow index.
struct UniformGrid {
    int nx = 0;
    int nz = 0;
    double h = 0.0;
    Vec2 origin{0.0, 0.0};

    std::size_t size() const { return static_cast<std::size_t>(nx) * nz; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    Vec2 point(int i, int j) const { return {origin.x + i * h, origin.z + j * h}; }
};

}  // namespace meshwave
