#include "surfreg/surface_geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "surfreg/errors.hpp"

namespace surfreg {

void require_nodes(const DomainMesh& mesh, Eigen::Index rows, const char* what) {
    if (static_cast<std::size_t>(rows) != mesh.node_count())
        throw MismatchError(std::string(what) + ": expected " + std::to_string(mesh.node_count()) +
                            " nodes, got " + std::to_string(rows));
}

void require_compatible(const Immersion& a, const Immersion& b) {
    if (!a.mesh || !b.mesh) throw MismatchError("immersion without mesh");
    if (a.mesh != b.mesh && !same_discretization(*a.mesh, *b.mesh))
        throw MismatchError("immersions live on different discretizations");
    if (a.coords.rows() != b.coords.rows()) throw MismatchError("immersion node counts differ");
}

Immersion identity_immersion(const MeshPtr& mesh) {
    NodalArray c(Eigen::Index(mesh->node_count()), 3);
    for (std::size_t a = 0; a < mesh->node_count(); ++a)
        c.row(Eigen::Index(a)) << mesh->nodes[a].x(), mesh->nodes[a].y(), 0.0;
    return {mesh, std::move(c)};
}

Eigen::Matrix3d corner_values(const NodalArray& values, const std::array<int, 3>& tri) {
    Eigen::Matrix3d c;
    for (int k = 0; k < 3; ++k) c.col(k) = values.row(tri[k]).transpose();
    return c;
}

Eigen::Matrix<double, 3, 2> element_derivative(const DomainMesh& mesh, const NodalArray& values,
                                               std::size_t t) {
    return corner_values(values, mesh.triangles[t]) * mesh.reference[t].grad;
}

ElementGeometry geometry_from_derivative(const Eigen::Matrix<double, 3, 2>& dq, std::size_t tri,
                                         double eps_reg) {
    ElementGeometry eg;
    eg.dq = dq;
    eg.g = dq.transpose() * dq;
    const double det = eg.g.determinant();
    if (!(det > eps_reg * eps_reg) || !std::isfinite(det)) throw DegenerateElementError(tri, det);
    eg.g_inv << eg.g(1, 1), -eg.g(0, 1), -eg.g(1, 0), eg.g(0, 0);
    eg.g_inv /= det;
    eg.vol = std::sqrt(det);
    return eg;
}

ElementGeometry element_geometry(const Immersion& q, std::size_t tri, double eps_reg) {
    const DomainMesh& mesh = q.domain();
    if (tri >= mesh.triangle_count()) throw InvalidArgument("triangle index out of range");
    return geometry_from_derivative(element_derivative(mesh, q.coords, tri), tri, eps_reg);
}

namespace {

double element_vol(const DomainMesh& mesh, const NodalArray& coords, std::size_t t) {
    const auto dq = element_derivative(mesh, coords, t);
    const double det = (dq.transpose() * dq).determinant();
    return std::sqrt(std::max(det, 0.0));
}

}  // namespace

RegularityReport check_regularity(const Immersion& q, double eps_reg) {
    if (!(eps_reg > 0.0)) throw InvalidArgument("regularity threshold must be positive");
    const DomainMesh& mesh = q.domain();
    RegularityReport report;
    report.min_vol = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const double v = element_vol(mesh, q.coords, t);
        report.min_vol = std::min(report.min_vol, v);
        if (!(v > eps_reg)) report.offending.push_back(t);
    }
    return report;
}

double default_regularity_threshold(const Immersion& q) {
    const DomainMesh& mesh = q.domain();
    std::vector<double> vols(mesh.triangle_count());
    for (std::size_t t = 0; t < vols.size(); ++t) vols[t] = element_vol(mesh, q.coords, t);
    auto mid = vols.begin() + std::ptrdiff_t(vols.size() / 2);
    std::nth_element(vols.begin(), mid, vols.end());
    return 1e-10 * *mid;
}

double surface_area(const Immersion& q) {
    const DomainMesh& mesh = q.domain();
    double area = 0.0;
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t)
        area += element_vol(mesh, q.coords, t) * mesh.reference[t].area;
    return area;
}

}  // namespace surfreg
