#include "meshwave/source.hpp"

#include <cmath>
#include <numbers>

#include "meshwave/errors.hpp"

namespace meshwave {

double ricker(const RickerSource& src, double t) {
    if (!(src.sigma_R > 0)) throw ValidationError("ricker: sigma_R must be positive");
    const double q = t / src.sigma_R;
    const double amp = 2.0 * src.s0 /
                       (std::sqrt(3.0 * src.sigma_R) * std::pow(std::numbers::pi, 0.25));
    return amp * (1.0 - q * q) * std::exp(-0.5 * q * q);
}

double delta_approx(const RickerSource& src, const Vec2& p) {
    if (!(src.epsilon > 0)) throw ValidationError("delta_approx: epsilon must be positive");
    const double r2 = dist2(p, src.position);
    return src.epsilon / (std::numbers::pi * (r2 + src.epsilon * src.epsilon));
}

void source_field_into(const RickerSource& src, const NodeSet& nodes, double t,
                       std::vector<double>& out) {
    out.assign(nodes.size(), 0.0);
    const double s = ricker(src, t);
    if (s == 0.0) return;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes.is_boundary(i)) continue;
        out[i] = s * delta_approx(src, nodes.positions[i]);
    }
}

std::vector<double> source_field(const RickerSource& src, const NodeSet& nodes, double t) {
    std::vector<double> out;
    source_field_into(src, nodes, t, out);
    return out;
}

}  // namespace meshwave
