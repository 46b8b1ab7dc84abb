#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "meshwave/nodes.hpp"

namespace meshwave {

/// Gaussian radial basis exp(-r^2/sigma^2); sigma is an absolute length.
struct GaussianBasis {
    double sigma;

    explicit GaussianBasis(double sigma_);
    double operator()(double r) const;   // value in (0, 1]
    double laplacian(double r) const;    // closed-form 2D Laplacian
};

/// Shape parameter spec: absolute length, or a multiple of the local mean
/// support radius (relative mode keeps refinement studies sane).
struct ShapeParameter {
    double value = 70.0;
    bool relative = false;

    bool operator==(const ShapeParameter&) const = default;
};

struct WeightSolveResult {
    std::vector<double> weights;
    double residual_rel = 0.0;     // ||Phi w - b|| / ||b||
    double rcond_estimate = 0.0;   // reciprocal pivot ratio of the factorization
};

/// Collocation weights for the Laplacian at `center` over the given support.
/// Solves the symmetric system Phi w = b; throws NumericalError on duplicate
/// support nodes.
WeightSolveResult compute_weights(const Vec2& center, const std::vector<Vec2>& support_positions,
                                  const GaussianBasis& basis);

struct Stencil {
    std::uint32_t center;
    std::vector<std::uint32_t> support;  // center included, sorted by distance
    std::vector<double> weights;
};

/// Discrete Laplacian: one stencil per interior node, computed once and
/// reused for the whole run. Boundary rows are empty (value conditions only).
class LaplacianOperator {
  public:
    LaplacianOperator(std::size_t node_count, std::size_t support_size);

    std::size_t node_count() const { return node_count_; }
    std::size_t support_size() const { return support_size_; }
    std::size_t condition_warnings() const { return condition_warnings_; }

    void set_stencil(std::uint32_t center, const std::vector<std::uint32_t>& support,
                     const std::vector<double>& weights);
    bool has_stencil(std::uint32_t i) const { return active_[i]; }
    Stencil stencil(std::uint32_t i) const;

    /// out[i] = sum_j w_ij * field[support_ij] for interior i, 0 elsewhere.
    std::vector<double> apply(const std::vector<double>& field) const;
    void apply_into(const std::vector<double>& field, std::vector<double>& out) const;

    /// Debug dump: CSV rows `center,neighbor,weight`.
    void dump_csv(std::ostream& out) const;

    void count_condition_warning() { ++condition_warnings_; }

  private:
    std::size_t node_count_;
    std::size_t support_size_;
    std::vector<std::uint32_t> support_;  // node_count x support_size, flat
    std::vector<double> weights_;
    std::vector<std::uint8_t> active_;
    std::size_t condition_warnings_ = 0;
};

/// Reciprocal-condition threshold below which a stencil solve is flagged.
inline constexpr double kConditionWarningThreshold = 1e-14;

/// RBF-FD assembly over all interior nodes: each node's n nearest neighbors
/// (itself included) form the support. Errors carry the offending node index.
LaplacianOperator assemble_laplacian(const NodeSet& nodes, const NeighborQuery& query,
                                     const ShapeParameter& shape, std::size_t support_size);

}  // namespace meshwave
