// Acceptance suite: ten end-to-end checks run at desk scale (plus one full
// production-scale reproduction at the end). Each criterion prints a single
// PASS/FAIL line; the process exits nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "meshwave/post.hpp"
#include "meshwave/rbf.hpp"
#include "meshwave/solver.hpp"
#include "meshwave/study.hpp"

using namespace meshwave;

namespace {

int g_failures = 0;

void report(int criterion, const char* name, bool ok, const std::string& detail) {
    std::printf("%s  criterion %2d  %-28s %s\n", ok ? "PASS" : "FAIL", criterion, name,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Uniform-grid 5-point stencil oracle, monotone in the shape parameter.

double five_point_discrepancy(double sigma_over_h) {
    const double h = 1.0;
    const Vec2 c{0, 0};
    const std::vector<Vec2> support{{0, 0}, {h, 0}, {-h, 0}, {0, h}, {0, -h}};
    const auto res = compute_weights(c, support, GaussianBasis(sigma_over_h * h));
    const std::vector<double> classic{-4.0 / (h * h), 1.0 / (h * h), 1.0 / (h * h),
                                      1.0 / (h * h), 1.0 / (h * h)};
    double worst = 0.0;
    for (std::size_t i = 0; i < classic.size(); ++i)
        worst = std::max(worst, std::abs(res.weights[i] - classic[i]) / std::abs(classic[i]));
    return worst;
}

void criterion_1() {
    const double d10 = five_point_discrepancy(10.0);
    const double d30 = five_point_discrepancy(30.0);
    const double d70 = five_point_discrepancy(70.0);
    const bool ok = d70 < 1e-3 && d70 < d30 && d30 < d10;
    report(1, "five-point stencil oracle", ok,
           fmt("rel dev %.2e / %.2e / %.2e at sigma/h = 10/30/70", d10, d30, d70));
}

// ---------------------------------------------------------------------------
// 2. Collocation exactness on 1000 random 7-node stencils.

void criterion_2() {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uc(0.0, 10.0), uo(-2.0, 2.0);
    const GaussianBasis basis(70.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec2 c{uc(rng), uc(rng)};
        std::vector<Vec2> support{c};
        while (support.size() < 7) {
            const Vec2 p{c.x + uo(rng), c.z + uo(rng)};
            bool far = true;
            for (const Vec2& q : support) far = far && dist(p, q) > 0.3;
            if (far) support.push_back(p);
        }
        const auto res = compute_weights(c, support, basis);
        // applying the weights to each support-centered basis function must
        // reproduce its analytic Laplacian at the stencil center
        for (std::size_t j = 0; j < support.size(); ++j) {
            double applied = 0.0;
            for (std::size_t k = 0; k < support.size(); ++k)
                applied += res.weights[k] * basis(dist(support[j], support[k]));
            const double analytic = basis.laplacian(dist(support[j], c));
            worst = std::max(worst, std::abs(applied - analytic) / std::abs(analytic));
        }
    }
    report(2, "collocation exactness", worst <= 1e-8, fmt("worst rel error %.2e", worst));
}

// ---------------------------------------------------------------------------
// 3. Wavefront radius tracks v * (t - t_delay).

// Crest radius via radial bins of |u| * sqrt(r) (undoes the cylindrical
// amplitude decay, which otherwise biases the crest inward), refined with a
// parabolic fit over the winning bin and its neighbors.
double crest_radius(const SnapshotField& snap, const Vec2& center, double r_lo, double r_hi) {
    const double bin_w = 0.5;
    const int nbins = static_cast<int>((r_hi - r_lo) / bin_w);
    std::vector<double> peak(nbins, 0.0);
    for (std::size_t i = 0; i < snap.positions.size(); ++i) {
        const double r = dist(snap.positions[i], center);
        const int b = static_cast<int>((r - r_lo) / bin_w);
        if (b < 0 || b >= nbins) continue;
        peak[b] = std::max(peak[b], std::abs(snap.values[i]) * std::sqrt(r));
    }
    int best = 1;
    for (int b = 1; b < nbins - 1; ++b)
        if (peak[b] > peak[best]) best = b;
    const double y0 = peak[best - 1], y1 = peak[best], y2 = peak[best + 1];
    const double sub = 0.5 * (y0 - y2) / (y0 - 2 * y1 + y2);
    return r_lo + (best + 0.5 + sub) * bin_w;
}

void criterion_3() {
    ScenarioConfig sc;
    sc.name = "wavefront";
    sc.domain = Rect(0, 100, 0, 100);
    sc.velocity.v = 3000.0;
    sc.spacing.a = 1.0;
    sc.source.sigma_R = 0.0005;
    sc.source.epsilon = 2.0;
    sc.source.position = {50, 50};
    sc.dt = 5e-5;
    sc.n_steps = 222;
    sc.abc_i_max = 10;
    sc.seed = 1;
    sc.recorders.snapshot_times = {0.007, 0.009, 0.011};
    const RunArtifacts art = run(sc);
    bool ok = true;
    std::ostringstream detail;
    for (const SnapshotField& snap : art.snapshots) {
        const double expect = sc.velocity.v * (snap.t - sc.source.delay());
        const double got = crest_radius(snap, sc.source.position, 4.0, 45.0);
        ok = ok && std::abs(got - expect) <= 2.0 * sc.spacing.a;
        detail << fmt(" t=%.3f: r=%.2f vs %.2f;", snap.t, got, expect);
    }
    report(3, "wavefront kinematics", ok, detail.str() + " tol 2 spacings");
}

// ---------------------------------------------------------------------------
// 4. Absorbing layer cuts the side-wall reflection by >= 5x at a probe.

double windowed_peak(const std::vector<double>& times, const std::vector<double>& values,
                     double t0, double t1) {
    double peak = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] >= t0 && times[i] <= t1) peak = std::max(peak, std::abs(values[i]));
    return peak;
}

void criterion_4() {
    // Wide shallow domain: the bottom-wall echo (120 m path) arrives well
    // separated from the free-surface echo and from the source near field,
    // which otherwise leaks into the window through the delta's tail. The
    // tighter epsilon keeps that near field localized.
    ScenarioConfig sc;
    sc.name = "abc";
    sc.domain = Rect(0, 300, 0, 100);
    sc.velocity.v = 1500.0;
    sc.spacing.a = 1.0;
    sc.source.sigma_R = 0.004;
    sc.source.epsilon = 1.0;
    sc.source.position = {150, 50};
    sc.dt = 2e-4;
    sc.n_steps = 576;
    sc.seed = 1;
    sc.recorders.probes = {{150, 30}};

    const double t_refl = sc.source.delay() + 120.0 / sc.velocity.v;
    const double t0 = t_refl - 0.011;
    const double t1 = t_refl + 0.011;

    sc.abc_i_max = 0;
    const RunArtifacts bare = run(sc);
    sc.abc_i_max = 30;
    const RunArtifacts damped = run(sc);

    const double peak_bare = windowed_peak(bare.probe_times, bare.probes[0].values, t0, t1);
    const double peak_damped = windowed_peak(damped.probe_times, damped.probes[0].values, t0, t1);
    const double ratio = peak_bare / std::max(peak_damped, 1e-300);
    report(4, "absorbing layer efficacy", ratio >= 5.0,
           fmt("reflected peak %.3e -> %.3e, ratio %.1f (need >= 5)", peak_bare, peak_damped,
               ratio));
}

// ---------------------------------------------------------------------------
// 5. Wavefront roundness: scattered solver is no worse than matched FDM.

void criterion_5() {
    ScenarioConfig sc;
    sc.name = "roundness";
    sc.domain = Rect(0, 100, 0, 100);
    sc.velocity.v = 1500.0;
    sc.spacing.a = 2.0;
    // short wavelength (~9.4 m, under 5 grid points) over ~4 wavelengths of
    // travel: grid dispersion anisotropy shows as ripple along the wavefront
    sc.source.sigma_R = 0.001;
    sc.source.position = {50, 50};
    sc.dt = 2e-4;
    sc.n_steps = 165;
    sc.abc_i_max = 10;
    sc.seed = 1;
    sc.recorders.snapshot_times = {0.033};

    const RunArtifacts rbf = run(sc);
    sc.backend = Backend::Fdm;
    sc.fdm_h = 2.0;
    const RunArtifacts fdm = run(sc);

    const double radius = 39.0;  // crest radius at the snapshot time
    const auto pr = circle_probe(rbf.snapshots[0], sc.source.position, radius, 72);
    const auto pf = circle_probe(fdm.snapshots[0], sc.source.position, radius, 72);
    report(5, "wavefront roundness vs FDM", pr.stddev <= pf.stddev,
           fmt("circle stddev rbffd %.3e <= fdm %.3e", pr.stddev, pf.stddev));
}

// ---------------------------------------------------------------------------
// 6. Probe-peak convergence under refinement.

void criterion_6() {
    ScenarioConfig sc;
    sc.name = "convergence";
    sc.domain = Rect(0, 100, 0, 100);
    sc.velocity.v = 1500.0;
    sc.spacing.a = 4.0;
    sc.source.sigma_R = 0.004;
    sc.source.position = {50, 50};
    sc.dt = 7e-4;
    sc.n_steps = 1;
    sc.abc_i_max = 0;
    sc.seed = 1;

    const double t_probe = sc.source.delay() + 20.0 / sc.velocity.v;
    const auto pts = convergence_study(sc, {4.0, 2.83, 2.0, 1.41}, {50, 30}, t_probe, 5e-3);
    const double d0 = std::abs(pts[1].peak_value - pts[0].peak_value);
    const double d1 = std::abs(pts[2].peak_value - pts[1].peak_value);
    const double d2 = std::abs(pts[3].peak_value - pts[2].peak_value);
    const bool ok = d1 <= d0 / 1.5 && d2 <= d1 / 1.5;
    report(6, "probe-peak convergence", ok,
           fmt("|deltas| %.3e -> %.3e -> %.3e (need 1.5x shrink)", d0, d1, d2));
}

// ---------------------------------------------------------------------------
// 7. Two-layer interface: reflection coefficient and transmitted wavelength.

double trough_separation(const SnapshotField& snap, double x, double z_lo, double z_hi) {
    const NeighborQuery index(snap.positions);
    const int n = 400;
    std::vector<double> z(n), u(n);
    for (int i = 0; i < n; ++i) {
        z[i] = z_lo + (z_hi - z_lo) * i / (n - 1);
        u[i] = sample_snapshot(snap, index, {x, z[i]});
    }
    const auto crest = std::max_element(u.begin(), u.end()) - u.begin();
    const auto above = std::min_element(u.begin(), u.begin() + crest) - u.begin();
    const auto below = std::min_element(u.begin() + crest, u.end()) - u.begin();
    return z[below] - z[above];
}

void criterion_7() {
    ScenarioConfig sc;
    sc.name = "two-layer";
    sc.domain = Rect(0, 300, 0, 300);
    sc.velocity.kind = VelocitySpec::Kind::TwoLayer;
    sc.velocity.v_top = 1500.0;
    sc.velocity.v_bottom = 3000.0;
    sc.velocity.interface_depth = 150.0;
    sc.spacing.a = 2.0;
    sc.source.sigma_R = 0.004;
    sc.source.position = {150, 90};
    sc.dt = 2e-4;
    sc.n_steps = 480;
    sc.abc_i_max = 20;
    sc.seed = 1;
    sc.recorders.probes = {{150, 120}};
    sc.recorders.snapshot_times = {0.0468, 0.0768};
    const RunArtifacts art = run(sc);

    // normal-incidence reflection at the probe between source and interface:
    // incident path 30 m, interface echo path 90 m, cylindrical spreading
    const double delay = sc.source.delay();
    const double a_inc = windowed_peak(art.probe_times, art.probes[0].values,
                                       delay + 30.0 / 1500.0 - 0.015, delay + 30.0 / 1500.0 + 0.015);
    const double a_refl = windowed_peak(art.probe_times, art.probes[0].values,
                                        delay + 90.0 / 1500.0 - 0.015, delay + 90.0 / 1500.0 + 0.015);
    const double r_meas = (a_refl / a_inc) * std::sqrt(90.0 / 30.0);
    const bool r_ok = std::abs(r_meas - 1.0 / 3.0) <= 0.2 / 3.0;

    // trough-to-trough width of the pulse before and after transmission
    const double w_top = trough_separation(art.snapshots[0], 150.0, 100.0, 148.0);
    const double w_bot = trough_separation(art.snapshots[1], 150.0, 160.0, 260.0);
    const double ratio = w_bot / w_top;
    const bool w_ok = std::abs(ratio - 2.0) <= 0.2;

    report(7, "two-layer interface physics", r_ok && w_ok,
           fmt("R %.3f vs 0.333 (+-20%%); wavelength ratio %.2f vs 2 (+-10%%)", r_meas, ratio));
}

// ---------------------------------------------------------------------------
// 8. Paired seismograms: scattered vs finite-difference backend.

void criterion_8() {
    ScenarioConfig sc;
    sc.name = "pairing";
    sc.domain = Rect(0, 100, 0, 100);
    sc.velocity.v = 1500.0;
    sc.spacing.a = 1.0;
    sc.source.sigma_R = 0.004;
    sc.source.position = {50, 50};
    sc.dt = 2e-4;
    sc.n_steps = 300;
    sc.abc_i_max = 10;
    sc.seed = 1;
    sc.recorders.receivers = {30, 50, 70};
    sc.recorders.receiver_depth = 4.0;

    const RunArtifacts rbf = run(sc);
    sc.backend = Backend::Fdm;
    sc.fdm_h = 1.0;
    const RunArtifacts fdm = run(sc);

    double peak = 0.0, diff = 0.0;
    for (std::size_t t = 0; t < rbf.seismogram.values.size(); ++t)
        for (std::size_t r = 0; r < rbf.seismogram.values[t].size(); ++r) {
            peak = std::max(peak, std::abs(rbf.seismogram.values[t][r]));
            diff = std::max(diff,
                            std::abs(rbf.seismogram.values[t][r] - fdm.seismogram.values[t][r]));
        }
    report(8, "rbffd/fdm seismogram match", diff <= 0.05 * peak,
           fmt("max diff %.3e vs 5%% of peak %.3e", diff, peak));
}

// ---------------------------------------------------------------------------
// 9. Bit-identical CSV artifacts on rerun.

std::string artifacts_as_csv(const RunArtifacts& art) {
    std::ostringstream out;
    write_nodes_csv(art.nodes, out);
    write_seismogram_csv(art.seismogram, out);
    for (const SnapshotField& s : art.snapshots) write_snapshot_csv(s, out);
    return out.str();
}

void criterion_9() {
    ScenarioConfig sc;
    sc.name = "determinism";
    sc.domain = Rect(0, 100, 0, 100);
    sc.velocity.v = 1500.0;
    sc.spacing.a = 2.0;
    sc.source.sigma_R = 0.004;
    sc.source.position = {50, 50};
    sc.dt = 5e-4;
    sc.n_steps = 100;
    sc.abc_i_max = 10;
    sc.seed = 3;
    sc.recorders.receivers = {25, 50, 75};
    sc.recorders.snapshot_times = {0.03, 0.05};

    const std::string a = artifacts_as_csv(run(sc));
    const std::string b = artifacts_as_csv(run(sc));
    report(9, "rerun determinism", a == b,
           fmt("%zu bytes of CSV artifacts %s", a.size(), a == b ? "identical" : "differ"));
}

// ---------------------------------------------------------------------------
// 10. Production-scale homogeneous run: completes, node count in band,
//     seismogram arrivals show the expected hyperbolic moveout.

void criterion_10() {
    ScenarioConfig sc;
    sc.name = "production";
    sc.domain = Rect(0, 500, 0, 500);
    sc.velocity.v = 3000.0;
    sc.spacing.a = 1.1;
    sc.source.sigma_R = 0.00147;
    sc.source.position = {150, 150};
    sc.dt = 9.8e-5;
    sc.n_steps = 2500;
    sc.abc_i_max = 30;
    sc.seed = 7;
    sc.recorders.receivers = {100, 150, 200, 250, 300};
    sc.recorders.seismogram_interval = 5;

    try {
        const RunArtifacts art = run(sc);
        const std::size_t n = art.nodes.size();
        const bool count_ok = n >= 223715 && n <= 273429;  // 248572 +- 10%

        // trace-peak times must track distance from the source (moveout check)
        bool moveout_ok = true;
        std::ostringstream arr;
        for (std::size_t r = 0; r < art.seismogram.receiver_x.size(); ++r) {
            double peak = 0.0, arrival = -1.0;
            for (std::size_t t = 0; t < art.seismogram.times.size(); ++t)
                if (std::abs(art.seismogram.values[t][r]) > peak) {
                    peak = std::abs(art.seismogram.values[t][r]);
                    arrival = art.seismogram.times[t];
                }
            const double dx = art.seismogram.receiver_x[r] - sc.source.position.x;
            const double dist = std::sqrt(dx * dx + sc.source.position.z * sc.source.position.z);
            const double expect = dist / sc.velocity.v + sc.source.delay();
            moveout_ok = moveout_ok && arrival > 0.0 &&
                         std::abs(arrival - expect) <
                             2.5 * sc.source.sigma_R + 2.0 * sc.spacing.a / sc.velocity.v +
                                 sc.recorders.seismogram_interval * sc.dt;
            arr << fmt(" x=%g: %.4f/%.4f", art.seismogram.receiver_x[r], arrival, expect);
        }
        report(10, "production-scale run", count_ok && moveout_ok,
               fmt("N=%zu (band ok: %d); arrivals vs oracle:%s", n, int(count_ok), arr.str().c_str()));
    } catch (const std::exception& e) {
        report(10, "production-scale run", false, std::string("threw: ") + e.what());
    }
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
