#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "meshwave/errors.hpp"
#include "meshwave/nodes.hpp"

using namespace meshwave;

namespace {

// Brute-force oracle for knn: full distance sort with index tie-break.
std::vector<std::uint32_t> knn_oracle(const std::vector<Vec2>& pts, const Vec2& c, std::size_t k) {
    std::vector<std::uint32_t> idx(pts.size());
    for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double da = (pts[a] - c).norm(), db = (pts[b] - c).norm();
        return da != db ? da < db : a < b;
    });
    idx.resize(k);
    return idx;
}

std::vector<Vec2> random_points(std::size_t n, std::uint64_t seed, double extent = 100.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, extent);
    std::vector<Vec2> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    return pts;
}

}  // namespace

TEST_SUITE_BEGIN("nodes");

TEST_CASE("classify_boundary follows the edge conventions") {
    const Rect dom(0, 500, 0, 500);
    CHECK(classify_boundary({0, 0}, dom) == NodeKind::TopBoundary);
    CHECK(classify_boundary({250, 0}, dom) == NodeKind::TopBoundary);
    CHECK(classify_boundary({500, 250}, dom) == NodeKind::SideOrBottomBoundary);
    CHECK(classify_boundary({250, 500}, dom) == NodeKind::SideOrBottomBoundary);
    CHECK(classify_boundary({250, 250}, dom) == NodeKind::Interior);
    // the free surface wins at its corners
    CHECK(classify_boundary({500, 0}, dom) == NodeKind::TopBoundary);
}

TEST_CASE("distance_to_boundary basics") {
    const Rect dom(0, 500, 0, 500);
    CHECK(distance_to_boundary({250, 250}, dom) == doctest::Approx(250));
    CHECK(distance_to_boundary({3, 100}, dom) == doctest::Approx(3));
    CHECK(distance_to_boundary({0, 100}, dom) == doctest::Approx(0));
    // excluding the top edge: a node just under the surface is far from the rest
    CHECK(distance_to_boundary({250, 1}, dom, false) == doctest::Approx(250));
    CHECK(distance_to_boundary({250, 1}, dom, true) == doctest::Approx(1));
}

TEST_CASE("generate_nodes: count bands") {
    // 10x10 with a=1: empirical band for this generator family.
    for (std::uint64_t seed : {3, 4, 5, 6, 7, 8, 9}) {
        const NodeSet ns = generate_nodes(Rect(0, 10, 0, 10), constant_spacing(1.0), seed);
        CHECK(ns.size() >= 80);
        CHECK(ns.size() <= 130);
    }
}

TEST_CASE("generate_nodes: determinism is bit-exact") {
    const SpacingField sp = constant_spacing(1.3);
    const NodeSet a = generate_nodes(Rect(0, 25, 0, 25), sp, 11);
    const NodeSet b = generate_nodes(Rect(0, 25, 0, 25), sp, 11);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.positions[i] == b.positions[i]);
        CHECK(a.kinds[i] == b.kinds[i]);
        CHECK(a.spacing[i] == b.spacing[i]);
    }
}

TEST_CASE("generate_nodes: minimum separation invariant") {
    NodeGenOptions opts;
    const NodeSet ns = generate_nodes(Rect(0, 40, 0, 40), constant_spacing(1.7), 5);
    const NeighborQuery q(ns.positions);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto nn = q.knn(ns.positions[i], 2);
        const double d = (ns.positions[i] - ns.positions[nn[1]]).norm();
        const double lim = opts.separation_factor * std::min(ns.spacing[i], ns.spacing[nn[1]]);
        CHECK(d >= lim - 1e-12);
    }
}

TEST_CASE("generate_nodes: coverage, every probe point has a node within 2a") {
    const double a = 1.7;
    const NodeSet ns = generate_nodes(Rect(0, 40, 0, 40), constant_spacing(a), 5);
    const NeighborQuery q(ns.positions);
    for (double x = 0.2; x < 40; x += 0.61)
        for (double z = 0.2; z < 40; z += 0.61) {
            const auto nn = q.knn({x, z}, 1);
            CHECK((Vec2{x, z} - ns.positions[nn[0]]).norm() <= 2 * a);
        }
}

TEST_CASE("generate_nodes: variable spacing tracks the field") {
    // spacing growing with depth: shallow region must be denser
    SpacingField sp;
    sp.eval = [](Vec2 p) { return 1.0 + p.z / 20.0; };
    sp.average_spacing = 2.0;
    const NodeSet ns = generate_nodes(Rect(0, 40, 0, 40), sp, 2);
    int shallow = 0, deep = 0;
    for (std::size_t i = 0; i < ns.size(); ++i)
        (ns.positions[i].z < 20 ? shallow : deep)++;
    CHECK(shallow > deep);
    for (std::size_t i = 0; i < ns.size(); ++i)
        CHECK(ns.spacing[i] == doctest::Approx(sp(ns.positions[i])));
}

TEST_CASE("generate_nodes: non-positive spacing is rejected") {
    SpacingField sp;
    sp.eval = [](Vec2 p) { return p.x < 5 ? 1.0 : -1.0; };
    sp.average_spacing = 1.0;
    CHECK_THROWS_AS(generate_nodes(Rect(0, 10, 0, 10), sp, 0), ValidationError);
}

TEST_CASE("knn: exact against brute force") {
    const auto pts = random_points(1000, 42);
    const NeighborQuery q(pts);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec2 c{u(rng), u(rng)};
        for (std::size_t k : {1, 7, 20}) {
            CHECK(q.knn(c, k) == knn_oracle(pts, c, k));
        }
    }
}

TEST_CASE("knn: node is its own nearest neighbor") {
    const auto pts = random_points(300, 3);
    const NeighborQuery q(pts);
    for (std::uint32_t i = 0; i < pts.size(); ++i) CHECK(q.knn(pts[i], 1)[0] == i);
}

TEST_CASE("knn: grid cross neighbors") {
    std::vector<Vec2> pts;
    for (int j = 0; j < 5; ++j)
        for (int i = 0; i < 5; ++i) pts.push_back({double(i), double(j)});
    const NeighborQuery q(pts);
    auto nn = q.knn({2, 2}, 5);
    std::sort(nn.begin() + 1, nn.end());
    CHECK(nn[0] == 12);  // center first
    CHECK(nn == std::vector<std::uint32_t>{12, 7, 11, 13, 17});
}

TEST_CASE("knn: k beyond the point count throws") {
    const NeighborQuery q(random_points(10, 0));
    CHECK_THROWS_AS(q.knn({0, 0}, 11), ValidationError);
}

TEST_CASE("radius query matches a linear scan") {
    const auto pts = random_points(500, 9);
    const NeighborQuery q(pts);
    const Vec2 c{50, 50};
    const double r = 13.0;
    auto got = q.radius(c, r);
    std::sort(got.begin(), got.end());
    std::vector<std::uint32_t> want;
    for (std::uint32_t i = 0; i < pts.size(); ++i)
        if ((pts[i] - c).norm() <= r) want.push_back(i);
    CHECK(got == want);
}

TEST_CASE("node CSV round-trip") {
    const NodeSet ns = generate_nodes(Rect(0, 12, 0, 12), constant_spacing(1.1), 4);
    std::stringstream buf;
    write_nodes_csv(ns, buf);
    const NodeSet back = read_nodes_csv(buf);
    REQUIRE(back.size() == ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        CHECK(back.positions[i] == ns.positions[i]);
        CHECK(back.kinds[i] == ns.kinds[i]);
        CHECK(back.spacing[i] == ns.spacing[i]);
    }
}

TEST_SUITE_END();
