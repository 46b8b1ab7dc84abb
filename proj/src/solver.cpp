#include "meshwave/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "meshwave/errors.hpp"
#include "meshwave/fdm.hpp"
#include "meshwave/parallel.hpp"

namespace meshwave {

AbsorbingLayer build_damping(const NodeSet& nodes, const Rect& domain, int i_max, double a) {
    if (i_max < 0) throw ValidationError("build_damping: i_max must be >= 0");
    if (!(a > 0)) throw ValidationError("build_damping: average spacing must be positive");

    AbsorbingLayer layer;
    layer.i_max = i_max;
    layer.average_spacing = a;
    layer.factors.assign(nodes.size(), 1.0);
    if (i_max == 0) return layer;

    for (std::size_t n = 0; n < nodes.size(); ++n) {
        const Vec2& p = nodes.positions[n];
        const double d_top = p.z - domain.z_min;
        const double d_side = distance_to_boundary(p, domain, /*include_top=*/false);
        if (d_top < d_side) continue;  // top strip stays undamped
        const double x = d_side / a;
        if (x < i_max) {
            const double e = layer.coefficient * (i_max - x);
            layer.factors[n] = std::exp(-e * e);
        }
    }
    return layer;
}

StabilityReport check_stability(const StepperConfig& cfg, double min_spacing, double max_velocity,
                                const std::vector<double>& spacing_over_velocity) {
    if (!(min_spacing > 0) || !(max_velocity > 0) || !(cfg.dt > 0))
        throw ValidationError("check_stability: inputs must be positive");
    StabilityReport rep;
    rep.dt_max = cfg.cfl_constant * min_spacing / max_velocity;
    rep.pass = cfg.dt <= rep.dt_max;
    if (!spacing_over_velocity.empty()) {
        const auto [lo, hi] =
            std::minmax_element(spacing_over_velocity.begin(), spacing_over_velocity.end());
        rep.min_ratio = *lo;
        rep.max_ratio = *hi;
    }
    return rep;
}

namespace {

void check_finite(const std::vector<double>& u, int step_index, std::size_t stride) {
    for (std::size_t i = 0; i < u.size(); i += stride) {
        if (!std::isfinite(u[i]))
            throw NumericalError("wavefield blow-up at step " + std::to_string(step_index));
    }
}

void step_impl(WaveState& state, const NodeSet& nodes, const LaplacianOperator& op,
               const RickerSource& src, const AbsorbingLayer& damp, const StepperConfig& cfg,
               std::vector<double>& lap) {
    const std::size_t n = nodes.size();
    op.apply_into(state.u_curr, lap);

    const double dt2 = cfg.dt * cfg.dt;
    const double s_t = ricker(src, state.t - src.delay());
    auto& u_prev = state.u_prev;
    auto& u_curr = state.u_curr;

    // u_prev becomes u_next in place, then the buffers swap roles.
    parallel_for_each(n, [&](std::size_t i) {
        if (nodes.is_boundary(i)) {
            u_prev[i] = 0.0;
            return;
        }
        const double inj = s_t == 0.0 ? 0.0 : s_t * delta_approx(src, nodes.positions[i]);
        double next = 2.0 * u_curr[i] - u_prev[i] + dt2 * cfg.velocity_squared[i] * (lap[i] + inj);
        next *= damp.factors[i];
        u_curr[i] *= damp.factors[i];
        u_prev[i] = next;
    });
    std::swap(state.u_prev, state.u_curr);
    ++state.step_index;
    state.t = state.step_index * cfg.dt;

    const std::size_t stride = state.step_index % 100 == 0 ? 1 : std::max<std::size_t>(1, n / 64);
    check_finite(state.u_curr, state.step_index, stride);
}

}  // namespace

void step(WaveState& state, const NodeSet& nodes, const LaplacianOperator& op,
          const RickerSource& src, const AbsorbingLayer& damp, const StepperConfig& cfg) {
    if (state.u_curr.size() != nodes.size() || state.u_prev.size() != nodes.size())
        throw ValidationError("step: state size does not match node count");
    if (cfg.velocity_squared.size() != nodes.size())
        throw ValidationError("step: velocity map size does not match node count");
    std::vector<double> lap;
    step_impl(state, nodes, op, src, damp, cfg, lap);
}

VelocityModel make_velocity_model(const ScenarioConfig& sc) {
    switch (sc.velocity.kind) {
        case VelocitySpec::Kind::Uniform:
            return VelocityModel(UniformVelocity{sc.velocity.v});
        case VelocitySpec::Kind::TwoLayer:
            return VelocityModel(TwoLayerVelocity{sc.velocity.v_top, sc.velocity.v_bottom,
                                                  sc.velocity.interface_depth});
        case VelocitySpec::Kind::Gridded:
            return read_velocity_model(sc.velocity.grid_file);
    }
    throw ValidationError("unknown velocity model kind");
}

SpacingField make_spacing_field(const ScenarioConfig& sc, const VelocityModel& model) {
    switch (sc.spacing.mode) {
        case SpacingSpec::Mode::Constant:
            return constant_spacing(sc.spacing.a);
        case SpacingSpec::Mode::TwoLayer:
            return delayed_jump_spacing(sc.domain, sc.spacing.a_shallow, sc.spacing.a_deep,
                                        sc.spacing.jump_depth, sc.spacing.smoothing_window);
        case SpacingSpec::Mode::FromVelocity:
            return spacing_from_velocity(model, sc.domain, sc.source.sigma_R,
                                         sc.spacing.nodes_per_wavelength,
                                         sc.spacing.smoothing_window);
    }
    throw ValidationError("unknown spacing mode");
}

RunArtifacts run_core(Discretization&& disc, const ScenarioConfig& sc, bool force,
                      const std::string& backend_tag) {
    const auto wall_start = std::chrono::steady_clock::now();
    const NodeSet& ns = disc.nodes;
    const std::size_t n = ns.size();

    double min_spacing = *std::min_element(ns.spacing.begin(), ns.spacing.end());
    // Scattered pairs may sit as close as the generator's separation bound.
    if (backend_tag == "rbffd") min_spacing *= NodeGenOptions{}.separation_factor;
    std::vector<double> ratio(n);
    for (std::size_t i = 0; i < n; ++i)
        ratio[i] = ns.spacing[i] / std::sqrt(disc.stepper.velocity_squared[i]);
    const double vmax = std::sqrt(
        *std::max_element(disc.stepper.velocity_squared.begin(), disc.stepper.velocity_squared.end()));

    RunArtifacts art;
    art.backend = backend_tag;
    art.stability = check_stability(disc.stepper, min_spacing, vmax, ratio);
    if (!art.stability.pass && !force)
        throw ValidationError("stability check failed: dt=" + std::to_string(disc.stepper.dt) +
                              " > dt_max=" + std::to_string(art.stability.dt_max) +
                              " (use --force to override)");

    WaveState state;
    state.u_prev.assign(n, 0.0);
    state.u_curr.assign(n, 0.0);

    // Map snapshot times to step indices once.
    std::vector<std::pair<int, std::size_t>> snap_steps;  // (step, config index)
    for (std::size_t s = 0; s < sc.recorders.snapshot_times.size(); ++s) {
        int st = static_cast<int>(std::llround(sc.recorders.snapshot_times[s] / disc.stepper.dt));
        st = std::clamp(st, 0, sc.n_steps);
        snap_steps.emplace_back(st, s);
    }
    std::sort(snap_steps.begin(), snap_steps.end());

    double receiver_depth = sc.recorders.receiver_depth;
    if (receiver_depth <= 0) receiver_depth = 2.0 * disc.damping.average_spacing;
    std::unique_ptr<SeismogramRecorder> seis;
    if (!sc.recorders.receivers.empty()) {
        seis = std::make_unique<SeismogramRecorder>(ns, sc.recorders.receivers, receiver_depth);
        art.seismogram.receiver_x = sc.recorders.receivers;
    }

    // Probe interpolation weights are geometry-only; fix them up front.
    std::vector<std::vector<std::uint32_t>> probe_idx;
    std::vector<std::vector<double>> probe_w;
    if (!sc.recorders.probes.empty()) {
        const NeighborQuery q(ns.positions);
        for (const Vec2& p : sc.recorders.probes) {
            const auto nn = q.knn(p, std::min<std::size_t>(8, n));
            std::vector<double> w(nn.size());
            double wsum = 0.0;
            int exact = -1;
            for (std::size_t j = 0; j < nn.size(); ++j) {
                const double r = dist(ns.positions[nn[j]], p);
                if (r < 1e-12) { exact = static_cast<int>(j); break; }
                w[j] = 1.0 / (r * r);
                wsum += w[j];
            }
            if (exact >= 0) {
                std::fill(w.begin(), w.end(), 0.0);
                w[exact] = 1.0;
            } else {
                for (auto& x : w) x /= wsum;
            }
            probe_idx.emplace_back(nn.begin(), nn.end());
            probe_w.push_back(std::move(w));
            art.probes.push_back(ProbeTrace{p, {}});
        }
    }

    auto take_snapshot = [&](double t) {
        SnapshotField f;
        f.t = t;
        f.backend = backend_tag;
        f.positions = ns.positions;
        f.values = state.u_curr;
        art.snapshots.push_back(std::move(f));
    };
    auto record_all = [&]() {
        if (seis && state.step_index % sc.recorders.seismogram_interval == 0) {
            art.seismogram.values.push_back(seis->record(state.u_curr));
            art.seismogram.times.push_back(state.t);
        }
        for (std::size_t p = 0; p < probe_idx.size(); ++p) {
            double v = 0.0;
            for (std::size_t j = 0; j < probe_idx[p].size(); ++j)
                v += probe_w[p][j] * state.u_curr[probe_idx[p][j]];
            art.probes[p].values.push_back(v);
        }
        if (!probe_idx.empty()) art.probe_times.push_back(state.t);
    };

    std::ostringstream diag;
    std::vector<double> lap;
    std::size_t next_snap = 0;
    while (next_snap < snap_steps.size() && snap_steps[next_snap].first == 0) {
        take_snapshot(0.0);
        ++next_snap;
    }
    if (sc.n_steps == 0 && snap_steps.empty()) take_snapshot(0.0);
    record_all();

    for (int s = 0; s < sc.n_steps; ++s) {
        step_impl(state, ns, disc.op, sc.source, disc.damping, disc.stepper, lap);
        record_all();
        while (next_snap < snap_steps.size() && snap_steps[next_snap].first == state.step_index) {
            take_snapshot(state.t);
            ++next_snap;
        }
        if (state.step_index % 100 == 0) {
            double umax = 0.0;
            for (double v : state.u_curr) umax = std::max(umax, std::abs(v));
            diag << "step " << state.step_index << " t=" << state.t << " max|u|=" << umax << "\n";
        }
    }
    art.seismogram_times = art.seismogram.times;

    const auto wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    art.condition_warnings = disc.op.condition_warnings();
    diag << "condition warnings: " << art.condition_warnings << "\n";
    diag << "wall time: " << wall << " s\n";
    art.diagnostics = diag.str();
    art.nodes = std::move(disc.nodes);
    return art;
}

RunArtifacts run(const ScenarioConfig& sc, bool force) {
    if (sc.backend == Backend::Fdm) return fdm_run(sc, force);

    const VelocityModel model = make_velocity_model(sc);
    const SpacingField spacing = make_spacing_field(sc, model);

    Discretization disc{
        generate_nodes(sc.domain, spacing, sc.seed),
        LaplacianOperator(0, 0),
        AbsorbingLayer{},
        StepperConfig{},
    };
    const NeighborQuery query(disc.nodes.positions);
    disc.op = assemble_laplacian(disc.nodes, query, sc.shape,
                                 static_cast<std::size_t>(sc.support));
    disc.damping = build_damping(disc.nodes, sc.domain, sc.abc_i_max, spacing.average_spacing);
    disc.stepper.dt = sc.dt;
    disc.stepper.cfl_constant = sc.cfl_constant;
    disc.stepper.velocity_squared.resize(disc.nodes.size());
    for (std::size_t i = 0; i < disc.nodes.size(); ++i) {
        const double v = model.at(disc.nodes.positions[i]);
        disc.stepper.velocity_squared[i] = v * v;
    }
    return run_core(std::move(disc), sc, force, "rbffd");
}

}  // namespace meshwave
