#include "meshwave/study.hpp"

#include <algorithm>
#include <cmath>

#include "meshwave/errors.hpp"
#include "meshwave/solver.hpp"

namespace meshwave {

std::vector<ConvergencePoint> convergence_study(const ScenarioConfig& scenario,
                                                const std::vector<double>& spacings,
                                                const Vec2& probe, double t_probe, double window) {
    if (spacings.empty()) throw ValidationError("convergence_study: no spacings given");
    for (std::size_t i = 1; i < spacings.size(); ++i)
        if (!(spacings[i] < spacings[i - 1]))
            throw ValidationError("convergence_study: spacings must be strictly decreasing");
    if (scenario.spacing.mode != SpacingSpec::Mode::Constant)
        throw ValidationError("convergence_study: requires constant-spacing scenario");

    const double a0 = scenario.spacing.a;
    const double t_end = t_probe + window;

    std::vector<ConvergencePoint> out;
    for (double a : spacings) {
        ScenarioConfig sc = scenario;
        sc.spacing.a = a;
        sc.fdm_h = a;
        sc.dt = scenario.dt * (a / a0);
        sc.n_steps = static_cast<int>(std::ceil(t_end / sc.dt)) + 1;
        sc.recorders = RecorderSpec{};
        sc.recorders.probes = {probe};

        const RunArtifacts art = run(sc);
        double peak = 0.0;
        const auto& trace = art.probes.at(0);
        for (std::size_t i = 0; i < trace.values.size(); ++i) {
            const double t = art.probe_times[i];
            if (t < t_probe - window || t > t_probe + window) continue;
            peak = std::max(peak, std::abs(trace.values[i]));
        }
        out.push_back({a, art.nodes.size(), peak});
    }
    return out;
}

}  // namespace meshwave
