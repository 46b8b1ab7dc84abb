#pragma once

#include "meshwave/grid.hpp"
#include "meshwave/solver.hpp"

namespace meshwave {

/// Classical 5-point Laplacian; boundary entries are zero.
std::vector<double> fdm_laplacian(const UniformGrid& grid, const std::vector<double>& field);

/// 5-point operator in the shared stencil representation, so the FDM backend
/// reuses the exact same time stepper and source path as RBF-FD.
LaplacianOperator fdm_operator(const UniformGrid& grid);

/// NodeSet view of the grid points (kinds classified against the domain).
NodeSet grid_nodes(const UniformGrid& grid, const Rect& domain);

/// Index-form Cerjan damping: G(i) = exp(-[0.015 (i_max - i)]^2) with i the
/// grid-cell distance to the nearest non-top edge.
AbsorbingLayer fdm_damping(const UniformGrid& grid, int i_max);

UniformGrid make_grid(const Rect& domain, double h);

RunArtifacts fdm_run(const ScenarioConfig& scenario, bool force = false);

}  // namespace meshwave
