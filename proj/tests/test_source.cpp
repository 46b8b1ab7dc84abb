#include <doctest.h>

#include <cmath>

#include "meshwave/errors.hpp"
#include "meshwave/source.hpp"

using namespace meshwave;

TEST_SUITE_BEGIN("source");

TEST_CASE("ricker wavelet values") {
    RickerSource src;
    src.s0 = 1.0;
    src.sigma_R = 0.00147;
    const double peak = ricker(src, 0.0);
    CHECK(peak == doctest::Approx(22.62).epsilon(1e-3));
    CHECK(ricker(src, src.sigma_R) == doctest::Approx(0.0));
    CHECK(ricker(src, -src.sigma_R) == doctest::Approx(0.0));
    // analytically 99 * exp(-50) ~ 1.9e-20 of the peak
    CHECK(std::abs(ricker(src, 10 * src.sigma_R)) < 1e-19 * peak);
}

TEST_CASE("ricker is even and integrates to zero") {
    RickerSource src;
    src.sigma_R = 0.002;
    for (double t : {0.0005, 0.0013, 0.004}) CHECK(ricker(src, t) == ricker(src, -t));
    // Simpson quadrature over +-10 sigma against the one-sided L1 mass
    const double lim = 10 * src.sigma_R;
    const int n = 20000;
    const double h = 2 * lim / n;
    double integral = ricker(src, -lim) + ricker(src, lim), abs_mass = 0;
    for (int i = 1; i < n; ++i) {
        const double t = -lim + i * h;
        integral += (i % 2 ? 4.0 : 2.0) * ricker(src, t);
        abs_mass += std::abs(ricker(src, t)) * h;
    }
    integral *= h / 3.0;
    CHECK(std::abs(integral) <= 1e-6 * abs_mass);
}

TEST_CASE("regularized delta") {
    RickerSource src;
    src.epsilon = 4.0;
    src.position = {0, 0};
    const double peak = delta_approx(src, {0, 0});
    CHECK(peak == doctest::Approx(1.0 / (4.0 * 3.14159265358979323846)));
    CHECK(delta_approx(src, {4, 0}) == doctest::Approx(0.5 * peak));
    CHECK(delta_approx(src, {400, 0}) <= 1e-4 * peak);
    // radial symmetry and monotone decay
    CHECK(delta_approx(src, {3, 4}) == doctest::Approx(delta_approx(src, {5, 0})));
    CHECK(delta_approx(src, {2, 0}) > delta_approx(src, {3, 0}));
}

TEST_CASE("source delay defaults to five sigma") {
    RickerSource src;
    src.sigma_R = 0.004;
    CHECK(src.delay() == doctest::Approx(0.02));
    src.t_delay = 0.007;
    CHECK(src.delay() == doctest::Approx(0.007));
}

TEST_CASE("source_field geometry") {
    NodeSet ns;
    ns.domain = Rect(0, 10, 0, 10);
    for (const Vec2 p : {Vec2{5, 5}, Vec2{6, 5}, Vec2{8, 8}, Vec2{5, 0}}) {
        ns.positions.push_back(p);
        ns.kinds.push_back(classify_boundary(p, ns.domain));
        ns.spacing.push_back(1.0);
    }
    RickerSource src;
    src.sigma_R = 0.001;
    src.position = {5, 5};
    src.epsilon = 2.0;

    // at the wavelet zero the whole field vanishes
    for (double v : source_field(src, ns, src.sigma_R)) CHECK(v == doctest::Approx(0.0));

    const auto f = source_field(src, ns, 0.0);
    CHECK(f[0] == doctest::Approx(ricker(src, 0.0) * delta_approx(src, ns.positions[0])));
    CHECK(f[0] > f[1]);  // maximum at the node nearest the source
    CHECK(f[1] > f[2]);
    CHECK(f[3] == 0.0);  // boundary node pinned
}

TEST_CASE("invalid parameters are rejected") {
    RickerSource src;
    src.sigma_R = -1.0;
    CHECK_THROWS_AS(ricker(src, 0.0), ValidationError);
    src.sigma_R = 0.001;
    src.epsilon = 0.0;
    CHECK_THROWS_AS(delta_approx(src, {0, 0}), ValidationError);
}

TEST_SUITE_END();
