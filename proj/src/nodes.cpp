#include "meshwave/nodes.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "meshwave/errors.hpp"

namespace meshwave {

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Interior: return "interior";
        case NodeKind::TopBoundary: return "top";
        case NodeKind::SideOrBottomBoundary: return "side_or_bottom";
    }
    return "?";
}

NodeKind node_kind_from_string(const std::string& s) {
    if (s == "interior") return NodeKind::Interior;
    if (s == "top") return NodeKind::TopBoundary;
    if (s == "side_or_bottom") return NodeKind::SideOrBottomBoundary;
    throw IoError("unknown node kind '" + s + "'");
}

SpacingField constant_spacing(double a) {
    if (!(a > 0)) throw ValidationError("spacing must be positive");
    return SpacingField{[a](Vec2) { return a; }, a};
}

double estimate_average_spacing(const std::function<double(Vec2)>& a, const Rect& domain,
                                int samples_per_axis) {
    double sum = 0.0;
    const int n = samples_per_axis;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Vec2 p{domain.x_min + (i + 0.5) / n * domain.width(),
                         domain.z_min + (j + 0.5) / n * domain.depth()};
            sum += a(p);
        }
    }
    return sum / (static_cast<double>(n) * n);
}

NodeKind classify_boundary(const Vec2& p, const Rect& domain, double tol) {
    if (p.z - domain.z_min <= tol) return NodeKind::TopBoundary;
    if (p.x - domain.x_min <= tol || domain.x_max - p.x <= tol || domain.z_max - p.z <= tol)
        return NodeKind::SideOrBottomBoundary;
    return NodeKind::Interior;
}

double distance_to_boundary(const Vec2& p, const Rect& domain, bool include_top) {
    double d = std::min({p.x - domain.x_min, domain.x_max - p.x, domain.z_max - p.z});
    if (include_top) d = std::min(d, p.z - domain.z_min);
    return d;
}

namespace {

// Uniform bucket grid used only during generation for separation checks.
class BucketGrid {
  public:
    BucketGrid(const Rect& domain, double cell)
        : domain_(domain),
          cell_(cell),
          nx_(std::max<int>(1, static_cast<int>(domain.width() / cell) + 1)),
          nz_(std::max<int>(1, static_cast<int>(domain.depth() / cell) + 1)),
          buckets_(static_cast<std::size_t>(nx_) * nz_) {}

    void insert(std::uint32_t idx, const Vec2& p) { buckets_[cell_of(p)].push_back(idx); }

    template <class Fn>
    void for_each_near(const Vec2& p, double r, Fn&& fn) const {
        const int span_x = static_cast<int>(r / cell_) + 1;
        const int span_z = span_x;
        const int ci = clampi(static_cast<int>((p.x - domain_.x_min) / cell_), 0, nx_ - 1);
        const int cj = clampi(static_cast<int>((p.z - domain_.z_min) / cell_), 0, nz_ - 1);
        for (int j = std::max(0, cj - span_z); j <= std::min(nz_ - 1, cj + span_z); ++j)
            for (int i = std::max(0, ci - span_x); i <= std::min(nx_ - 1, ci + span_x); ++i)
                for (std::uint32_t idx : buckets_[static_cast<std::size_t>(j) * nx_ + i]) fn(idx);
    }

  private:
    static int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

    std::size_t cell_of(const Vec2& p) const {
        const int i = clampi(static_cast<int>((p.x - domain_.x_min) / cell_), 0, nx_ - 1);
        const int j = clampi(static_cast<int>((p.z - domain_.z_min) / cell_), 0, nz_ - 1);
        return static_cast<std::size_t>(j) * nx_ + i;
    }

    Rect domain_;
    double cell_;
    int nx_, nz_;
    std::vector<std::vector<std::uint32_t>> buckets_;
};

double checked_spacing(const SpacingField& spacing, const Vec2& p) {
    const double a = spacing(p);
    if (!(a > 0) || !std::isfinite(a))
        throw ValidationError("spacing field non-positive at (" + std::to_string(p.x) + ", " +
                              std::to_string(p.z) + ")");
    return a;
}

// Places nodes along one edge segment at the local target spacing, endpoints
// excluded (corners are placed separately).
void fill_edge(const Vec2& from, const Vec2& to, const SpacingField& spacing,
               std::vector<Vec2>& out) {
    const double len = dist(from, to);
    const Vec2 dir = (to - from) * (1.0 / len);
    // First pass: step at the local spacing to see where the chain would end,
    // then shrink all arc-length positions so the final gap to the far corner
    // matches the local spacing instead of leaving a short remainder segment.
    std::vector<double> arc;
    double s = checked_spacing(spacing, from);
    while (s < len) {
        arc.push_back(s);
        s += checked_spacing(spacing, from + dir * s);
    }
    const double scale = len / s;
    for (double si : arc) out.push_back(from + dir * (si * scale));
}

}  // namespace

NodeSet generate_nodes(const Rect& domain, const SpacingField& spacing, std::uint64_t seed,
                       const NodeGenOptions& opts) {
    const double gamma = opts.separation_factor;
    if (!(gamma > 0) || gamma >= 1.0)
        throw ValidationError("separation factor must lie in (0, 1)");

    // Minimum spacing over a probe grid sizes the bucket grid.
    double a_min = std::numeric_limits<double>::infinity();
    const int probe = 48;
    for (int i = 0; i <= probe; ++i)
        for (int j = 0; j <= probe; ++j) {
            const Vec2 p{domain.x_min + i * domain.width() / probe,
                         domain.z_min + j * domain.depth() / probe};
            a_min = std::min(a_min, checked_spacing(spacing, p));
        }

    NodeSet ns;
    ns.domain = domain;

    std::vector<Vec2> boundary;
    boundary.push_back({domain.x_min, domain.z_min});
    boundary.push_back({domain.x_max, domain.z_min});
    boundary.push_back({domain.x_min, domain.z_max});
    boundary.push_back({domain.x_max, domain.z_max});
    fill_edge({domain.x_min, domain.z_min}, {domain.x_max, domain.z_min}, spacing, boundary);
    fill_edge({domain.x_min, domain.z_max}, {domain.x_max, domain.z_max}, spacing, boundary);
    fill_edge({domain.x_min, domain.z_min}, {domain.x_min, domain.z_max}, spacing, boundary);
    fill_edge({domain.x_max, domain.z_min}, {domain.x_max, domain.z_max}, spacing, boundary);

    BucketGrid grid(domain, std::max(gamma * a_min, 1e-9));

    auto accept = [&](const Vec2& p, double a_p) {
        ns.positions.push_back(p);
        ns.kinds.push_back(classify_boundary(p, domain));
        ns.spacing.push_back(a_p);
        grid.insert(static_cast<std::uint32_t>(ns.positions.size() - 1), p);
    };

    for (const Vec2& p : boundary) accept(p, checked_spacing(spacing, p));

    auto separated = [&](const Vec2& c, double a_c) {
        bool ok = true;
        grid.for_each_near(c, gamma * a_c, [&](std::uint32_t idx) {
            if (!ok) return;
            const double lim = gamma * std::min(a_c, ns.spacing[idx]);
            if (dist2(c, ns.positions[idx]) < lim * lim) ok = false;
        });
        return ok;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uangle(0.0, 2.0 * std::numbers::pi);

    // Advancing front seeded by the boundary nodes, FIFO order. Candidates sit
    // at regularly spread angles sharing one random rotation for the whole
    // fill: aligned fronts pack almost hexagonally, which both hits the target
    // density and keeps the assembled Laplacian spectrum close to the real
    // axis (irregular stencils otherwise feed a slow leapfrog instability).
    const double global_rot = uangle(rng);
    std::size_t head = 0;
    while (head < ns.positions.size()) {
        const Vec2 p = ns.positions[head];
        const double a_p = ns.spacing[head];
        ++head;
        const double rot = global_rot;
        for (int c = 0; c < opts.candidates_per_node; ++c) {
            const double th = rot + 2.0 * std::numbers::pi * c / opts.candidates_per_node;
            const Vec2 cand{p.x + a_p * std::cos(th), p.z + a_p * std::sin(th)};
            if (!domain.contains(cand)) continue;
            const double a_c = checked_spacing(spacing, cand);
            if (distance_to_boundary(cand, domain) < opts.boundary_margin * a_c) continue;
            if (separated(cand, a_c)) accept(cand, a_c);
        }
    }
    return ns;
}

// ---- NeighborQuery ---------------------------------------------------------

NeighborQuery::NeighborQuery(std::vector<Vec2> points) : points_(std::move(points)) {
    order_.resize(points_.size());
    for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
    if (points_.empty()) return;
    double x0 = points_[0].x, x1 = points_[0].x, z0 = points_[0].z, z1 = points_[0].z;
    for (const auto& p : points_) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        z0 = std::min(z0, p.z);
        z1 = std::max(z1, p.z);
    }
    Rect bounds;
    bounds.x_min = x0;
    bounds.x_max = x1 + 1e-300;
    bounds.z_min = z0;
    bounds.z_max = z1 + 1e-300;
    root_ = build(0, static_cast<std::uint32_t>(order_.size()), bounds);
}

std::int32_t NeighborQuery::build(std::uint32_t begin, std::uint32_t end, const Rect& bounds) {
    Node nd;
    nd.begin = begin;
    nd.end = end;
    nd.bounds = bounds;
    const std::uint32_t count = end - begin;
    const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(nd);
    if (count <= 16) return id;

    const bool split_x = (bounds.x_max - bounds.x_min) >= (bounds.z_max - bounds.z_min);
    const std::uint32_t mid = begin + count / 2;
    auto cmp = [&](std::uint32_t a, std::uint32_t b) {
        return split_x ? points_[a].x < points_[b].x : points_[a].z < points_[b].z;
    };
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end, cmp);
    const double split = split_x ? points_[order_[mid]].x : points_[order_[mid]].z;

    Rect lb = bounds, rb = bounds;
    if (split_x)
        lb.x_max = rb.x_min = split;
    else
        lb.z_max = rb.z_min = split;
    const std::int32_t l = build(begin, mid, lb);
    const std::int32_t r = build(mid, end, rb);
    nodes_[id].axis = split_x ? 0 : 1;
    nodes_[id].split = split;
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
}

namespace {
double bounds_dist2(const Rect& b, const Vec2& p) {
    const double dx = p.x < b.x_min ? b.x_min - p.x : (p.x > b.x_max ? p.x - b.x_max : 0.0);
    const double dz = p.z < b.z_min ? b.z_min - p.z : (p.z > b.z_max ? p.z - b.z_max : 0.0);
    return dx * dx + dz * dz;
}
}  // namespace

std::vector<std::uint32_t> NeighborQuery::knn(const Vec2& center, std::size_t k) const {
    if (k > points_.size()) throw ValidationError("knn: k exceeds node count");
    if (k == 0) return {};

    using Entry = std::pair<double, std::uint32_t>;  // (dist2, index)
    auto worse = [](const Entry& a, const Entry& b) {
        return a.first < b.first || (a.first == b.first && a.second < b.second);
    };
    std::vector<Entry> heap;  // max-heap keyed by (dist2, index)
    heap.reserve(k + 1);

    std::vector<std::int32_t> stack;
    stack.push_back(root_);
    while (!stack.empty()) {
        const std::int32_t id = stack.back();
        stack.pop_back();
        const Node& nd = nodes_[static_cast<std::size_t>(id)];
        if (heap.size() == k && bounds_dist2(nd.bounds, center) > heap.front().first) continue;
        if (nd.left < 0) {
            for (std::uint32_t i = nd.begin; i < nd.end; ++i) {
                const std::uint32_t idx = order_[i];
                const Entry e{dist2(points_[idx], center), idx};
                if (heap.size() < k) {
                    heap.push_back(e);
                    std::push_heap(heap.begin(), heap.end(), worse);
                } else if (worse(e, heap.front())) {
                    std::pop_heap(heap.begin(), heap.end(), worse);
                    heap.back() = e;
                    std::push_heap(heap.begin(), heap.end(), worse);
                }
            }
        } else {
            const double c = nd.axis == 0 ? center.x : center.z;
            // Visit the nearer side first (stack: push farther first).
            if (c < nd.split) {
                stack.push_back(nd.right);
                stack.push_back(nd.left);
            } else {
                stack.push_back(nd.left);
                stack.push_back(nd.right);
            }
        }
    }

    std::sort(heap.begin(), heap.end());
    std::vector<std::uint32_t> result(heap.size());
    for (std::size_t i = 0; i < heap.size(); ++i) result[i] = heap[i].second;
    return result;
}

std::vector<std::uint32_t> NeighborQuery::radius(const Vec2& center, double r) const {
    std::vector<std::uint32_t> result;
    if (root_ < 0) return result;
    const double r2 = r * r;
    std::vector<std::int32_t> stack{root_};
    while (!stack.empty()) {
        const Node& nd = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        if (bounds_dist2(nd.bounds, center) > r2) continue;
        if (nd.left < 0) {
            for (std::uint32_t i = nd.begin; i < nd.end; ++i)
                if (dist2(points_[order_[i]], center) <= r2) result.push_back(order_[i]);
        } else {
            stack.push_back(nd.left);
            stack.push_back(nd.right);
        }
    }
    return result;
}

// ---- CSV -------------------------------------------------------------------

void write_nodes_csv(const NodeSet& nodes, std::ostream& out) {
    out << "x,z,kind,spacing\n";
    char buf[128];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%s,%.17g\n", nodes.positions[i].x,
                      nodes.positions[i].z, to_string(nodes.kinds[i]), nodes.spacing[i]);
        out << buf;
    }
}

void write_nodes_csv(const NodeSet& nodes, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    write_nodes_csv(nodes, f);
    if (!f) throw IoError("write failed for '" + path + "'");
}

NodeSet read_nodes_csv(std::istream& in) {
    NodeSet ns;
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,z,kind,spacing", 0) != 0)
        throw IoError("node CSV: missing header");
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, z0 = x0, z1 = -x0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string fx, fz, fk, fa;
        if (!std::getline(ss, fx, ',') || !std::getline(ss, fz, ',') ||
            !std::getline(ss, fk, ',') || !std::getline(ss, fa))
            throw IoError("node CSV: malformed line '" + line + "'");
        const Vec2 p{std::stod(fx), std::stod(fz)};
        ns.positions.push_back(p);
        ns.kinds.push_back(node_kind_from_string(fk));
        ns.spacing.push_back(std::stod(fa));
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        z0 = std::min(z0, p.z);
        z1 = std::max(z1, p.z);
    }
    if (ns.positions.empty()) throw IoError("node CSV: no nodes");
    ns.domain = Rect(x0, x1, z0, z1);
    return ns;
}

NodeSet read_nodes_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "'");
    return read_nodes_csv(f);
}

}  // namespace meshwave
