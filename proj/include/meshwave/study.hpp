#pragma once

#include <vector>

#include "meshwave/config.hpp"
#include "meshwave/geometry.hpp"

namespace meshwave {

struct ConvergencePoint {
    double spacing = 0.0;
    std::size_t node_count = 0;
    double peak_value = 0.0;
};

/// Reruns the scenario at each target spacing and records the local-in-time
/// peak |u| at the probe around t_probe (window half-width defaults to 2 ms).
/// dt is rescaled proportionally to the spacing so each run stays inside its
/// own stability bound.
std::vector<ConvergencePoint> convergence_study(const ScenarioConfig& scenario,
                                                const std::vector<double>& spacings,
                                                const Vec2& probe, double t_probe,
                                                double window = 2e-3);

}  // namespace meshwave
