#pragma once

#include <vector>

#include "meshwave/nodes.hpp"

namespace meshwave {

/// Ricker point source: wavelet time signature plus a regularized spatial
/// delta of width epsilon. epsilon must exceed the local node spacing so the
/// source is resolved on any discretization.
struct RickerSource {
    double s0 = 1.0;        // pressure amplitude, N/m^2
    double sigma_R = 1.0;   // wavelet flatness parameter, s
    Vec2 position{0, 0};
    double epsilon = 4.0;   // delta regularization width, m
    double t_delay = 0.0;   // injection time shift; 0 means "use 5*sigma_R"

    bool operator==(const RickerSource&) const = default;

    double delay() const { return t_delay > 0 ? t_delay : 5.0 * sigma_R; }
};

/// s(t) = 2 s0 / (sqrt(3 sigma_R) pi^{1/4}) (1 - (t/sigma_R)^2) exp(-t^2 / (2 sigma_R^2))
double ricker(const RickerSource& src, double t);

/// delta(r) ~= (1/pi) eps / (r^2 + eps^2)
double delta_approx(const RickerSource& src, const Vec2& p);

/// Per-node injection ricker(t) * delta_approx(node); zero on the boundary
/// (Dirichlet values are pinned there). The time stepper passes t - delay()
/// so runs start from near-silence.
std::vector<double> source_field(const RickerSource& src, const NodeSet& nodes, double t);
void source_field_into(const RickerSource& src, const NodeSet& nodes, double t,
                       std::vector<double>& out);

}  // namespace meshwave
