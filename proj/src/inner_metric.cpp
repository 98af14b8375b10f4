#include "surfreg/inner_metric.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>

#include "surfreg/errors.hpp"

namespace surfreg {

namespace {

using Mat32 = Eigen::Matrix<double, 3, 2>;

// Exact integral of phi_a * phi_b over a linear triangle, divided by its area.
double mass_weight(int a, int b) { return a == b ? 1.0 / 6.0 : 1.0 / 12.0; }

std::vector<ElementGeometry> compute_geometry(const Immersion& q) {
    const DomainMesh& mesh = q.domain();
    const std::size_t nt = mesh.triangle_count();
    std::vector<Mat32> dqs(nt);
    std::vector<double> vols(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        dqs[t] = element_derivative(mesh, q.coords, t);
        vols[t] = std::sqrt(std::max((dqs[t].transpose() * dqs[t]).determinant(), 0.0));
    }
    std::vector<double> sorted = vols;
    auto mid = sorted.begin() + std::ptrdiff_t(sorted.size() / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    const double eps_reg = 1e-10 * *mid;

    std::vector<ElementGeometry> geometry;
    geometry.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) geometry.push_back(geometry_from_derivative(dqs[t], t, eps_reg));
    return geometry;
}

// Local 3x3 block of M + alpha^2 S on one element.
Eigen::Matrix3d element_block(const TriangleReference& ref, const ElementGeometry& eg, double alpha) {
    const double scale = ref.area * eg.vol;
    Eigen::Matrix3d local = alpha * alpha * (ref.grad * eg.g_inv * ref.grad.transpose());
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) local(a, b) += mass_weight(a, b);
    return scale * local;
}

SparseMatrix assemble_block(const DomainMesh& mesh, const std::vector<ElementGeometry>& geometry,
                            double alpha) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(9 * mesh.triangle_count());
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const Eigen::Matrix3d local = element_block(mesh.reference[t], geometry[t], alpha);
        const auto& tri = mesh.triangles[t];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)  // upper triangle only, so K is bitwise symmetric
                triplets.emplace_back(tri[a], tri[b], local(std::min(a, b), std::max(a, b)));
    }
    const auto n = Eigen::Index(mesh.node_count());
    SparseMatrix k(n, n);
    k.setFromTriplets(triplets.begin(), triplets.end());
    return k;
}

// Per-element quantities shared by the first and second variation of
// l_T = 1/2 |T| vol(g) C,  C = P(u,v) + alpha^2 tr(g^{-1} S),
// where P is the exact mass pairing of the corner values divided by |T| and
// S = sym(du^T dv).
struct VariationTerms {
    double c = 0.0;
    Eigen::Matrix2d s;
    Eigen::Matrix2d b;  // g^{-1} S g^{-1}
    Eigen::Matrix2d m;  // C g^{-1} - 2 alpha^2 B
};

VariationTerms variation_terms(const ElementGeometry& eg, const Eigen::Matrix3d& uc,
                               const Eigen::Matrix3d& vc, const Mat32& du, const Mat32& dv,
                               double alpha) {
    VariationTerms vt;
    const double p = (uc.rowwise().sum().dot(vc.rowwise().sum()) + (uc.cwiseProduct(vc)).sum()) / 12.0;
    const Eigen::Matrix2d w = du.transpose() * dv;
    vt.s = 0.5 * (w + w.transpose());
    const double a2 = alpha * alpha;
    vt.c = p + a2 * (eg.g_inv.cwiseProduct(vt.s)).sum();
    vt.b = eg.g_inv * vt.s * eg.g_inv;
    vt.m = vt.c * eg.g_inv - 2.0 * a2 * vt.b;
    return vt;
}

void scatter(const std::array<int, 3>& tri, const Eigen::Matrix3d& local, NodalArray& out) {
    for (int a = 0; a < 3; ++a) out.row(tri[a]) += local.col(a).transpose();
}

}  // namespace

MetricOperator::MetricOperator(const Immersion& q, double alpha, SolverOptions solver)
    : q_(q), alpha_(alpha), solver_(solver) {
    if (!q.mesh) throw InvalidArgument("immersion without mesh");
    require_nodes(q.domain(), q.coords.rows(), "immersion");
    if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be non-negative");
    geometry_ = compute_geometry(q_);
    block_ = assemble_block(q_.domain(), geometry_, alpha_);
}

SparseMatrix MetricOperator::full_matrix() const {
    const Eigen::Index n = block_.rows();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(std::size_t(3 * block_.nonZeros()));
    for (int k = 0; k < 3; ++k)
        for (Eigen::Index col = 0; col < block_.outerSize(); ++col)
            for (SparseMatrix::InnerIterator it(block_, col); it; ++it)
                triplets.emplace_back(k * n + it.row(), k * n + it.col(), it.value());
    SparseMatrix full(3 * n, 3 * n);
    full.setFromTriplets(triplets.begin(), triplets.end());
    return full;
}

NodalArray MetricOperator::apply(const NodalArray& x) const {
    require_nodes(q_.domain(), x.rows(), "metric apply");
    return block_ * x;
}

NodalArray MetricOperator::solve(const NodalArray& b) const {
    require_nodes(q_.domain(), b.rows(), "metric solve");
    NodalArray x = NodalArray::Zero(b.rows(), 3);
    if (b.isZero(0.0)) return x;

    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(solver_.rel_tol);
    cg.setMaxIterations(solver_.max_iter > 0 ? solver_.max_iter : int(30 * block_.rows()));
    cg.compute(block_);
    for (int k = 0; k < 3; ++k) {
        const Eigen::VectorXd rhs = b.col(k);
        if (rhs.isZero(0.0)) continue;
        x.col(k) = cg.solve(rhs);
        if (cg.info() != Eigen::Success || !(cg.error() <= solver_.rel_tol))
            throw SolverError("conjugate gradient did not converge (residual " + std::to_string(cg.error()) +
                              " after " + std::to_string(cg.iterations()) + " iterations)");
    }
    return x;
}

MetricOperator assemble(const Immersion& q, double alpha, SolverOptions solver) {
    return MetricOperator(q, alpha, solver);
}

double inner_product(const MetricOperator& op, const TangentField& u, const TangentField& v) {
    require_nodes(op.surface().domain(), u.values.rows(), "inner product");
    require_nodes(op.surface().domain(), v.values.rows(), "inner product");
    const double uv = u.values.cwiseProduct(op.apply(v.values)).sum();
    if (&u == &v || u.values == v.values) return uv;
    // Averaging both orders makes the result exactly symmetric in (u, v).
    return 0.5 * (uv + v.values.cwiseProduct(op.apply(u.values)).sum());
}

double norm(const MetricOperator& op, const TangentField& u) {
    return std::sqrt(std::max(inner_product(op, u, u), 0.0));
}

Covector flat(const MetricOperator& op, const TangentField& u) { return Covector(op.apply(u.values)); }

TangentField sharp(const MetricOperator& op, const Covector& p) { return TangentField(op.solve(p.values)); }

SparseMatrix parameter_mass_matrix(const DomainMesh& mesh) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(9 * mesh.triangle_count());
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                triplets.emplace_back(tri[a], tri[b], mesh.reference[t].area * mass_weight(a, b));
    }
    const auto n = Eigen::Index(mesh.node_count());
    SparseMatrix m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

Covector dl_dq(const MetricOperator& op, const TangentField& u, const TangentField& v) {
    const DomainMesh& mesh = op.surface().domain();
    require_nodes(mesh, u.values.rows(), "dl_dq");
    require_nodes(mesh, v.values.rows(), "dl_dq");
    const double alpha = op.alpha();
    NodalArray out = NodalArray::Zero(Eigen::Index(mesh.node_count()), 3);
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        const auto& ref = mesh.reference[t];
        const ElementGeometry& eg = op.geometry()[t];
        const Eigen::Matrix3d uc = corner_values(u.values, tri);
        const Eigen::Matrix3d vc = corner_values(v.values, tri);
        const VariationTerms vt = variation_terms(eg, uc, vc, uc * ref.grad, vc * ref.grad, alpha);
        // dl_T/d(dq) = 1/2 |T| vol dq M
        const Mat32 f = 0.5 * ref.area * eg.vol * eg.dq * vt.m;
        scatter(tri, f * ref.grad.transpose(), out);
    }
    return Covector(std::move(out));
}

Covector dl_dq(const Immersion& q, double alpha, const TangentField& u, const TangentField& v) {
    return dl_dq(MetricOperator(q, alpha), u, v);
}

Covector metric_derivative(const MetricOperator& op, const TangentField& w, const TangentField& u) {
    const DomainMesh& mesh = op.surface().domain();
    require_nodes(mesh, u.values.rows(), "metric_derivative");
    require_nodes(mesh, w.values.rows(), "metric_derivative");
    const double a2 = op.alpha() * op.alpha();
    NodalArray out = NodalArray::Zero(Eigen::Index(mesh.node_count()), 3);
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        const auto& ref = mesh.reference[t];
        const ElementGeometry& eg = op.geometry()[t];
        const Mat32 dw = corner_values(w.values, tri) * ref.grad;
        const Eigen::Matrix2d dg = dw.transpose() * eg.dq + eg.dq.transpose() * dw;
        const Eigen::Matrix2d dginv = -eg.g_inv * dg * eg.g_inv;
        const double dvol = 0.5 * eg.vol * (eg.g_inv.cwiseProduct(dg)).sum();

        Eigen::Matrix3d local = a2 * (ref.grad * eg.g_inv * ref.grad.transpose());
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) local(a, b) += mass_weight(a, b);
        local = ref.area * (dvol * local + eg.vol * a2 * (ref.grad * dginv * ref.grad.transpose()));
        // local is symmetric; column a of (U local) is the contribution to node a.
        scatter(tri, corner_values(u.values, tri) * local, out);
    }
    return Covector(std::move(out));
}

Covector d2l_dq2(const MetricOperator& op, const TangentField& u, const TangentField& w) {
    const DomainMesh& mesh = op.surface().domain();
    require_nodes(mesh, u.values.rows(), "d2l_dq2");
    require_nodes(mesh, w.values.rows(), "d2l_dq2");
    const double a2 = op.alpha() * op.alpha();
    NodalArray out = NodalArray::Zero(Eigen::Index(mesh.node_count()), 3);
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        const auto& ref = mesh.reference[t];
        const ElementGeometry& eg = op.geometry()[t];
        const Eigen::Matrix3d uc = corner_values(u.values, tri);
        const Mat32 du = uc * ref.grad;
        const Mat32 dw = corner_values(w.values, tri) * ref.grad;
        const VariationTerms vt = variation_terms(eg, uc, uc, du, du, op.alpha());

        // Directional derivative of dl_T/d(dq) along dw; the Hessian of l_T in
        // dq is symmetric, so this is also the covector of the second variation.
        const Eigen::Matrix2d dg = dw.transpose() * eg.dq + eg.dq.transpose() * dw;
        const Eigen::Matrix2d dginv = -eg.g_inv * dg * eg.g_inv;
        const double dvol = 0.5 * eg.vol * (eg.g_inv.cwiseProduct(dg)).sum();
        const double dc = -a2 * (vt.b.cwiseProduct(dg)).sum();
        const Eigen::Matrix2d db = dginv * vt.s * eg.g_inv + eg.g_inv * vt.s * dginv;
        const Eigen::Matrix2d dm = dc * eg.g_inv + vt.c * dginv - 2.0 * a2 * db;
        const Mat32 df = 0.5 * ref.area * (dvol * eg.dq * vt.m + eg.vol * dw * vt.m + eg.vol * eg.dq * dm);
        scatter(tri, df * ref.grad.transpose(), out);
    }
    return Covector(std::move(out));
}

Covector d2l_dq2(const Immersion& q, double alpha, const TangentField& u, const TangentField& w) {
    return d2l_dq2(MetricOperator(q, alpha), u, w);
}

}  // namespace surfreg
