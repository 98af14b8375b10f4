#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "surfreg/fields.hpp"
#include "surfreg/surface_geometry.hpp"

namespace surfreg {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Settings of the preconditioned conjugate gradient solve behind `sharp`.
struct SolverOptions {
    double rel_tol = 1e-10;  ///< relative residual |b - Ax| / |b|
    int max_iter = 0;        ///< 0 selects 10 * (3n)
};

/// The H^1 inner metric
///
///   <u,v>_q = sum_k int_M ( u^k v^k + alpha^2 g^{ij} d_i u^k d_j v^k ) vol(g) dx
///
/// discretized with linear elements. The three components share a single
/// scalar n x n block K = M(q) + alpha^2 S(q), so applying the operator to a
/// nodal field is K * values.
class MetricOperator {
public:
    MetricOperator(const Immersion& q, double alpha, SolverOptions solver = {});

    const SparseMatrix& block() const { return block_; }
    /// Full 3n x 3n matrix with component-major ordering (k*n + a).
    SparseMatrix full_matrix() const;

    double alpha() const { return alpha_; }
    const Immersion& surface() const { return q_; }
    const std::vector<ElementGeometry>& geometry() const { return geometry_; }
    const SolverOptions& solver_options() const { return solver_; }
    std::size_t node_count() const { return q_.node_count(); }

    NodalArray apply(const NodalArray& x) const;
    /// Solves K X = B column-wise. Throws SolverError on non-convergence.
    NodalArray solve(const NodalArray& b) const;

private:
    Immersion q_;
    double alpha_;
    SolverOptions solver_;
    std::vector<ElementGeometry> geometry_;
    SparseMatrix block_;
};

/// Assembles the metric at q. Throws DegenerateElementError if q is not
/// regular at the default threshold; alpha must be non-negative.
MetricOperator assemble(const Immersion& q, double alpha, SolverOptions solver = {});

double inner_product(const MetricOperator& op, const TangentField& u, const TangentField& v);
double norm(const MetricOperator& op, const TangentField& u);

/// Velocity to momentum: p = K u.
Covector flat(const MetricOperator& op, const TangentField& u);
/// Momentum to velocity: solves K u = p.
TangentField sharp(const MetricOperator& op, const Covector& p);

/// Mass matrix of the flat parameter domain (vol = 1), used by the L^2 matching term.
SparseMatrix parameter_mass_matrix(const DomainMesh& mesh);

/// First variation of l(u,v;q) = 1/2 <u,v>_q with respect to q, as the nodal
/// covector of  dq -> d/dh l(u,v;q + h dq).  Symmetric in (u,v).
Covector dl_dq(const Immersion& q, double alpha, const TangentField& u, const TangentField& v);
Covector dl_dq(const MetricOperator& op, const TangentField& u, const TangentField& v);

/// Directional derivative of the metric along w applied to u: the covector
/// (d/dh K(q + h w)) u. Equivalently, 2 x the covector in v of
/// v -> < dl_dq(q, alpha, u, v), w >.
Covector metric_derivative(const MetricOperator& op, const TangentField& w, const TangentField& u);

/// Second variation: the covector of  dq -> d/dh < dl_dq(q + h dq, alpha, u, u), w >.
Covector d2l_dq2(const Immersion& q, double alpha, const TangentField& u, const TangentField& w);
Covector d2l_dq2(const MetricOperator& op, const TangentField& u, const TangentField& w);

}  // namespace surfreg
