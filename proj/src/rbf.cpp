#include "meshwave/rbf.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <ostream>

#include "meshwave/errors.hpp"
#include "meshwave/parallel.hpp"

namespace meshwave {

GaussianBasis::GaussianBasis(double sigma_) : sigma(sigma_) {
    if (!(sigma > 0)) throw ValidationError("shape parameter must be positive");
}

double GaussianBasis::operator()(double r) const {
    return std::exp(-r * r / (sigma * sigma));
}

double GaussianBasis::laplacian(double r) const {
    const double s2 = sigma * sigma;
    const double r2 = r * r;
    return (4.0 * r2 / (s2 * s2) - 4.0 / s2) * std::exp(-r2 / s2);
}

WeightSolveResult compute_weights(const Vec2& center, const std::vector<Vec2>& support_positions,
                                  const GaussianBasis& basis) {
    const int n = static_cast<int>(support_positions.size());
    if (n == 0) throw ValidationError("compute_weights: empty support");

    Eigen::MatrixXd phi(n, n);
    Eigen::VectorXd b(n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            const double r = dist(support_positions[k], support_positions[j]);
            if (j != k && r == 0.0)
                throw NumericalError("compute_weights: duplicate support nodes");
            phi(k, j) = basis(r);
        }
        b(k) = basis.laplacian(dist(center, support_positions[k]));
    }

    // Tiny dense system: LDLT first, fully pivoted LU as the robust fallback.
    Eigen::VectorXd w;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(phi);
    bool ok = ldlt.info() == Eigen::Success;
    if (ok) w = ldlt.solve(b);

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(phi);  // also the condition diagnostic
    if (!ok || !w.allFinite()) {
        if (!lu.isInvertible()) throw NumericalError("compute_weights: singular system");
        w = lu.solve(b);
    }

    // One step of iterative refinement; near-flat bases are severely
    // ill-conditioned and this recovers most of the lost residual.
    Eigen::VectorXd r = b - phi * w;
    w += lu.solve(r);
    r = b - phi * w;

    WeightSolveResult res;
    res.weights.assign(w.data(), w.data() + n);
    const double bnorm = b.norm();
    res.residual_rel = bnorm > 0 ? r.norm() / bnorm : r.norm();
    const Eigen::VectorXd diag = lu.matrixLU().diagonal().cwiseAbs();
    const double dmax = diag.maxCoeff();
    res.rcond_estimate = dmax > 0 ? diag.minCoeff() / dmax : 0.0;
    return res;
}

LaplacianOperator::LaplacianOperator(std::size_t node_count, std::size_t support_size)
    : node_count_(node_count),
      support_size_(support_size),
      support_(node_count * support_size, 0),
      weights_(node_count * support_size, 0.0),
      active_(node_count, 0) {}

void LaplacianOperator::set_stencil(std::uint32_t center,
                                    const std::vector<std::uint32_t>& support,
                                    const std::vector<double>& weights) {
    if (support.size() != support_size_ || weights.size() != support_size_)
        throw ValidationError("set_stencil: size mismatch");
    const std::size_t off = static_cast<std::size_t>(center) * support_size_;
    for (std::size_t j = 0; j < support_size_; ++j) {
        support_[off + j] = support[j];
        weights_[off + j] = weights[j];
    }
    active_[center] = 1;
}

Stencil LaplacianOperator::stencil(std::uint32_t i) const {
    const std::size_t off = static_cast<std::size_t>(i) * support_size_;
    Stencil s;
    s.center = i;
    s.support.assign(support_.begin() + off, support_.begin() + off + support_size_);
    s.weights.assign(weights_.begin() + off, weights_.begin() + off + support_size_);
    return s;
}

void LaplacianOperator::apply_into(const std::vector<double>& field,
                                   std::vector<double>& out) const {
    if (field.size() != node_count_)
        throw ValidationError("apply: field length does not match node count");
    out.resize(node_count_);
    parallel_for_each(node_count_, [&](std::size_t i) {
        if (!active_[i]) {
            out[i] = 0.0;
            return;
        }
        const std::size_t off = i * support_size_;
        double acc = 0.0;
        for (std::size_t j = 0; j < support_size_; ++j)
            acc += weights_[off + j] * field[support_[off + j]];
        out[i] = acc;
    });
}

std::vector<double> LaplacianOperator::apply(const std::vector<double>& field) const {
    std::vector<double> out;
    apply_into(field, out);
    return out;
}

void LaplacianOperator::dump_csv(std::ostream& out) const {
    out << "center,neighbor,weight\n";
    for (std::size_t i = 0; i < node_count_; ++i) {
        if (!active_[i]) continue;
        const std::size_t off = i * support_size_;
        for (std::size_t j = 0; j < support_size_; ++j)
            out << i << ',' << support_[off + j] << ',' << weights_[off + j] << '\n';
    }
}

LaplacianOperator assemble_laplacian(const NodeSet& nodes, const NeighborQuery& query,
                                     const ShapeParameter& shape, std::size_t support_size) {
    const std::size_t n = nodes.size();
    if (support_size > n) throw ValidationError("assemble_laplacian: support size exceeds node count");
    if (query.size() != n) throw ValidationError("assemble_laplacian: query/node count mismatch");

    LaplacianOperator op(n, support_size);
    std::size_t warn_count = 0;
    std::vector<std::size_t> warns(n, 0);

    parallel_for_each(n, [&](std::size_t i) {
        if (nodes.is_boundary(i)) return;
        try {
            const auto support = query.knn(nodes.positions[i], support_size);
            std::vector<Vec2> pts(support_size);
            double mean_r = 0.0;
            for (std::size_t j = 0; j < support_size; ++j) {
                pts[j] = nodes.positions[support[j]];
                mean_r += dist(pts[j], nodes.positions[i]);
            }
            mean_r /= static_cast<double>(support_size - 1);

            const double sigma = shape.relative ? shape.value * mean_r : shape.value;
            const auto res = compute_weights(nodes.positions[i], pts, GaussianBasis(sigma));
            if (res.rcond_estimate < kConditionWarningThreshold) warns[i] = 1;
            op.set_stencil(static_cast<std::uint32_t>(i), support, res.weights);
        } catch (const std::exception& e) {
            throw NumericalError("stencil at node " + std::to_string(i) + ": " + e.what());
        }
    });

    for (std::size_t i = 0; i < n; ++i) warn_count += warns[i];
    for (std::size_t i = 0; i < warn_count; ++i) op.count_condition_warning();
    return op;
}

}  // namespace meshwave
