#include "meshwave/fdm.hpp"

#include <algorithm>
#include <cmath>

#include "meshwave/errors.hpp"

namespace meshwave {

UniformGrid make_grid(const Rect& domain, double h) {
    if (!(h > 0)) throw ValidationError("make_grid: spacing must be positive");
    UniformGrid g;
    g.h = h;
    g.origin = {domain.x_min, domain.z_min};
    g.nx = static_cast<int>(std::llround(domain.width() / h)) + 1;
    g.nz = static_cast<int>(std::llround(domain.depth() / h)) + 1;
    if (g.nx < 3 || g.nz < 3) throw ValidationError("make_grid: grid too small");
    return g;
}

std::vector<double> fdm_laplacian(const UniformGrid& grid, const std::vector<double>& field) {
    if (field.size() != grid.size())
        throw ValidationError("fdm_laplacian: field size does not match grid");
    std::vector<double> out(field.size(), 0.0);
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    for (int j = 1; j < grid.nz - 1; ++j) {
        for (int i = 1; i < grid.nx - 1; ++i) {
            const std::size_t c = grid.index(i, j);
            out[c] = (field[c - 1] + field[c + 1] + field[c - grid.nx] + field[c + grid.nx] -
                      4.0 * field[c]) *
                     inv_h2;
        }
    }
    return out;
}

LaplacianOperator fdm_operator(const UniformGrid& grid) {
    LaplacianOperator op(grid.size(), 5);
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    const std::vector<double> w{-4.0 * inv_h2, inv_h2, inv_h2, inv_h2, inv_h2};
    for (int j = 1; j < grid.nz - 1; ++j) {
        for (int i = 1; i < grid.nx - 1; ++i) {
            const std::uint32_t c = static_cast<std::uint32_t>(grid.index(i, j));
            op.set_stencil(c,
                           {c, c - 1, c + 1, c - static_cast<std::uint32_t>(grid.nx),
                            c + static_cast<std::uint32_t>(grid.nx)},
                           w);
        }
    }
    return op;
}

NodeSet grid_nodes(const UniformGrid& grid, const Rect& domain) {
    NodeSet ns;
    ns.domain = domain;
    ns.positions.reserve(grid.size());
    for (int j = 0; j < grid.nz; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const Vec2 p = grid.point(i, j);
            ns.positions.push_back(p);
            if (i == 0 || j == 0 || i == grid.nx - 1 || j == grid.nz - 1)
                ns.kinds.push_back(classify_boundary(p, domain, 0.5 * grid.h));
            else
                ns.kinds.push_back(NodeKind::Interior);
            ns.spacing.push_back(grid.h);
        }
    return ns;
}

AbsorbingLayer fdm_damping(const UniformGrid& grid, int i_max) {
    if (i_max < 0) throw ValidationError("fdm_damping: i_max must be >= 0");
    AbsorbingLayer layer;
    layer.i_max = i_max;
    layer.average_spacing = grid.h;
    layer.factors.assign(grid.size(), 1.0);
    if (i_max == 0) return layer;

    for (int j = 0; j < grid.nz; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const int d_side = std::min({i, grid.nx - 1 - i, grid.nz - 1 - j});
            if (j < d_side) continue;  // top strip
            if (d_side < i_max) {
                const double e = layer.coefficient * (i_max - d_side);
                layer.factors[grid.index(i, j)] = std::exp(-e * e);
            }
        }
    return layer;
}

RunArtifacts fdm_run(const ScenarioConfig& sc, bool force) {
    const VelocityModel model = make_velocity_model(sc);
    double h = sc.fdm_h;
    if (h <= 0) {
        const SpacingField spacing = make_spacing_field(sc, model);
        h = spacing.average_spacing;
    }
    const UniformGrid grid = make_grid(sc.domain, h);

    Discretization disc{grid_nodes(grid, sc.domain), fdm_operator(grid),
                        fdm_damping(grid, sc.abc_i_max), StepperConfig{}};
    disc.stepper.dt = sc.dt;
    disc.stepper.cfl_constant = sc.cfl_constant;
    disc.stepper.velocity_squared.resize(disc.nodes.size());
    for (std::size_t i = 0; i < disc.nodes.size(); ++i) {
        const double v = model.at(disc.nodes.positions[i]);
        disc.stepper.velocity_squared[i] = v * v;
    }
    return run_core(std::move(disc), sc, force, "fdm");
}

}  // namespace meshwave
