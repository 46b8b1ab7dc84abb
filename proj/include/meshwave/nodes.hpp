#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "meshwave/geometry.hpp"

namespace meshwave {

enum class NodeKind : std::uint8_t {
    Interior = 0,
    TopBoundary = 1,
    SideOrBottomBoundary = 2,
};

const char* to_string(NodeKind k);
NodeKind node_kind_from_string(const std::string& s);

/// Target inter-nodal distance a(x,z), strictly positive over the domain.
struct SpacingField {
    std::function<double(Vec2)> eval;
    double average_spacing = 0.0;

    double operator()(const Vec2& p) const { return eval(p); }
};

SpacingField constant_spacing(double a);

/// Estimates the mean of a(x,z) over the domain on a coarse probe grid.
double estimate_average_spacing(const std::function<double(Vec2)>& a, const Rect& domain,
                                int samples_per_axis = 64);

/// Scattered discretization of the domain: positions, boundary
/// classification and the local target spacing. Immutable after generation.
struct NodeSet {
    Rect domain;
    std::vector<Vec2> positions;
    std::vector<NodeKind> kinds;
    std::vector<double> spacing;

    std::size_t size() const { return positions.size(); }
    bool is_boundary(std::size_t i) const { return kinds[i] != NodeKind::Interior; }
};

/// kind of a position relative to the domain edges. The top edge wins at
/// corners: the free surface extends across the full width.
NodeKind classify_boundary(const Vec2& p, const Rect& domain, double tol = 1e-12);

/// Shortest distance from p to the domain edges; include_top=false skips the
/// free surface (the form used by the absorbing layer).
double distance_to_boundary(const Vec2& p, const Rect& domain, bool include_top = true);

struct NodeGenOptions {
    double separation_factor = 0.8;    // gamma: reject closer than gamma*min(a,a)
    int candidates_per_node = 12;
    double boundary_margin = 0.7;     // interior candidates keep this * a off the edges
};

/// Poisson-disk style fill: edges discretized first at local spacing, then an
/// advancing front expands candidates on circles of radius a(p). Deterministic
/// for a fixed seed.
NodeSet generate_nodes(const Rect& domain, const SpacingField& spacing, std::uint64_t seed,
                       const NodeGenOptions& opts = {});

/// Exact k-nearest-neighbor index over a fixed point set (2D kd-tree).
/// Ties in distance break toward the lower node index.
class NeighborQuery {
  public:
    explicit NeighborQuery(std::vector<Vec2> points);

    std::size_t size() const { return points_.size(); }
    const Vec2& point(std::size_t i) const { return points_[i]; }

    /// k nearest indices sorted by ascending distance (then index).
    std::vector<std::uint32_t> knn(const Vec2& center, std::size_t k) const;

    /// Indices of all points within radius r of center (unordered).
    std::vector<std::uint32_t> radius(const Vec2& center, double r) const;

  private:
    struct Node {
        std::uint32_t begin, end;  // range in order_
        std::int32_t left = -1, right = -1;
        std::uint8_t axis = 0;
        double split = 0.0;
        Rect bounds{0, 1, 0, 1};
    };

    std::int32_t build(std::uint32_t begin, std::uint32_t end, const Rect& bounds);

    std::vector<Vec2> points_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

/// CSV export/import, header `x,z,kind,spacing`, 17 significant digits.
void write_nodes_csv(const NodeSet& nodes, std::ostream& out);
void write_nodes_csv(const NodeSet& nodes, const std::string& path);
NodeSet read_nodes_csv(std::istream& in);
NodeSet read_nodes_csv(const std::string& path);

}  // namespace meshwave
