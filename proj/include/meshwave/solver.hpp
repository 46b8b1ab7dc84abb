#pragma once

#include <memory>
#include <string>
#include <vector>

#include "meshwave/config.hpp"
#include "meshwave/media.hpp"
#include "meshwave/nodes.hpp"
#include "meshwave/post.hpp"
#include "meshwave/rbf.hpp"
#include "meshwave/source.hpp"

namespace meshwave {

/// Two consecutive wavefield snapshots plus the simulation clock.
struct WaveState {
    std::vector<double> u_prev;
    std::vector<double> u_curr;
    int step_index = 0;
    double t = 0.0;
};

/// Cerjan-style multiplicative damping layer. G = 1 outside the layer and in
/// the top strip (surface reflections are physical).
struct AbsorbingLayer {
    int i_max = 0;
    double coefficient = 0.015;
    double average_spacing = 0.0;
    std::vector<double> factors;  // per node, in (0, 1]
};

struct StepperConfig {
    double dt = 0.0;
    double cfl_constant = 0.70710678118654752;
    std::vector<double> velocity_squared;  // per node
};

AbsorbingLayer build_damping(const NodeSet& nodes, const Rect& domain, int i_max, double a);

struct StabilityReport {
    double dt_max = 0.0;
    bool pass = false;
    double min_ratio = 0.0;  // min over nodes of a(p)/v(p)
    double max_ratio = 0.0;
};

/// dt_max = C * min_spacing / max_velocity. The ratio map lets the caller see
/// how uniformly a(p)/v(p) is balanced across the medium.
StabilityReport check_stability(const StepperConfig& cfg, double min_spacing, double max_velocity,
                                const std::vector<double>& spacing_over_velocity = {});

/// One explicit central-difference step; both time levels are damped.
/// Throws NumericalError when the field blows up.
void step(WaveState& state, const NodeSet& nodes, const LaplacianOperator& op,
          const RickerSource& src, const AbsorbingLayer& damp, const StepperConfig& cfg);

struct ProbeTrace {
    Vec2 position;
    std::vector<double> values;  // one per step
};

struct RunArtifacts {
    NodeSet nodes;
    Seismogram seismogram;
    std::vector<SnapshotField> snapshots;
    std::vector<double> seismogram_times;
    std::vector<ProbeTrace> probes;
    std::vector<double> probe_times;
    StabilityReport stability;
    std::string backend;
    std::string diagnostics;  // per-100-step max|u|, condition warnings, wall time
    std::size_t condition_warnings = 0;
};

/// Prepared discretization shared by the RBF-FD and FDM paths; only the node
/// layout and the Laplacian differ between them.
struct Discretization {
    NodeSet nodes;
    LaplacianOperator op;
    AbsorbingLayer damping;
    StepperConfig stepper;
};

/// Full pipeline: node generation, weight assembly, stability check, time
/// loop with recorders. Set force=true to run past a failed CFL check.
RunArtifacts run(const ScenarioConfig& scenario, bool force = false);

/// Time loop over an already prepared discretization (used by both backends).
RunArtifacts run_core(Discretization&& disc, const ScenarioConfig& scenario, bool force,
                      const std::string& backend_tag);

/// Builds the velocity model named by the scenario.
VelocityModel make_velocity_model(const ScenarioConfig& scenario);

/// Builds the target spacing field named by the scenario.
SpacingField make_spacing_field(const ScenarioConfig& scenario, const VelocityModel& model);

}  // namespace meshwave
