#include "surfreg/fixtures.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "surfreg/errors.hpp"

namespace surfreg {

namespace {

constexpr double kPi = std::numbers::pi;

void require_topology(const DomainMesh& mesh, Topology t, const char* what) {
    if (mesh.topology != t)
        throw InvalidArgument(std::string(what) + " needs a " + std::string(to_string(t)) + " mesh");
}

}  // namespace

Immersion bent_cylinder(const MeshPtr& mesh, const CylinderParams& p) {
    require_topology(*mesh, Topology::Cylinder, "cylinder fixture");
    if (!(p.radius > 0.0) || !(p.height > 0.0)) throw InvalidArgument("cylinder radius and height must be positive");
    if (p.ripples < 0) throw InvalidArgument("ripple count must be non-negative");
    if (std::abs(p.ripple_amplitude) >= p.radius) throw InvalidArgument("ripple amplitude must be below the radius");
    const double bend = p.bend_degrees * kPi / 180.0;
    if (bend != 0.0 && p.height / std::abs(bend) <= p.radius)
        throw InvalidArgument("bend too strong: axis curvature radius below the cylinder radius");

    NodalArray c(Eigen::Index(mesh->node_count()), 3);
    for (std::size_t a = 0; a < mesh->node_count(); ++a) {
        const double theta = 2.0 * kPi * mesh->nodes[a].x();
        const double z = mesh->nodes[a].y();
        const double rho = p.radius + p.ripple_amplitude * std::sin(2.0 * kPi * p.ripples * z);
        const double s = p.height * z;
        Eigen::Vector3d center(0.0, 0.0, s);
        Eigen::Vector3d normal(1.0, 0.0, 0.0);
        if (bend != 0.0) {
            const double bend_radius = p.height / bend;
            const double phi = bend * z;
            center = Eigen::Vector3d(bend_radius * (1.0 - std::cos(phi)), 0.0, bend_radius * std::sin(phi));
            normal = Eigen::Vector3d(std::cos(phi), 0.0, -std::sin(phi));
        }
        const Eigen::Vector3d binormal(0.0, 1.0, 0.0);
        c.row(Eigen::Index(a)) = (center + rho * (std::cos(theta) * normal + std::sin(theta) * binormal)).transpose();
    }
    return {mesh, std::move(c)};
}

Immersion straight_cylinder(const MeshPtr& mesh, double radius, double height) {
    CylinderParams p;
    p.radius = radius;
    p.height = height;
    return bent_cylinder(mesh, p);
}

Immersion torus(const MeshPtr& mesh, const TorusParams& p) {
    require_topology(*mesh, Topology::Torus, "torus fixture");
    if (!(p.minor > 0.0) || !(p.major > p.minor * (1.0 + std::abs(p.asymmetry))) || std::abs(p.asymmetry) >= 1.0)
        throw InvalidArgument("torus radii must satisfy major > minor * (1 + |asymmetry|) > 0");
    NodalArray c(Eigen::Index(mesh->node_count()), 3);
    for (std::size_t a = 0; a < mesh->node_count(); ++a) {
        const double theta = 2.0 * kPi * mesh->nodes[a].x();
        const double phi = 2.0 * kPi * mesh->nodes[a].y();
        const double tube = p.minor * (1.0 + p.asymmetry * std::cos(theta));
        const double ring = p.major + tube * std::cos(phi);
        c.row(Eigen::Index(a)) << ring * std::cos(theta), ring * std::sin(theta), tube * std::sin(phi);
    }
    return {mesh, std::move(c)};
}

Immersion vase(const MeshPtr& mesh, const VaseParams& p) {
    require_topology(*mesh, Topology::Cylinder, "vase fixture");
    NodalArray c(Eigen::Index(mesh->node_count()), 3);
    for (std::size_t a = 0; a < mesh->node_count(); ++a) {
        const double theta = 2.0 * kPi * mesh->nodes[a].x();
        const double z = mesh->nodes[a].y();
        const double rho = p.radius * (1.0 + p.bulge * std::sin(kPi * z) + p.waist * std::sin(2.0 * kPi * z) +
                                       p.flare * std::sin(3.0 * kPi * z));
        if (!(rho > 0.0)) throw InvalidArgument("vase profile radius must stay positive");
        c.row(Eigen::Index(a)) << rho * std::cos(theta), rho * std::sin(theta), p.height * z;
    }
    return {mesh, std::move(c)};
}

std::vector<VaseParams> default_vases() {
    return {
        {0.25, 1.0, 0.30, 0.00, 0.00},
        {0.25, 1.0, 0.15, 0.10, 0.00},
        {0.25, 1.0, 0.20, -0.10, 0.05},
        {0.25, 1.0, 0.05, 0.00, 0.12},
        {0.25, 1.0, 0.25, 0.05, -0.08},
    };
}

Eigen::Matrix3d rotation(const Eigen::Vector3d& axis, double degrees) {
    if (!(axis.norm() > 0.0)) throw InvalidArgument("rotation axis must be nonzero");
    return Eigen::AngleAxisd(degrees * kPi / 180.0, axis.normalized()).toRotationMatrix();
}

Immersion rigid_transform(const Immersion& q, const Eigen::Matrix3d& rot, const Eigen::Vector3d& shift) {
    NodalArray c = q.coords * rot.transpose();
    c.rowwise() += shift.transpose();
    return {q.mesh, std::move(c)};
}

std::array<Immersion, 3> triangle_tori(const MeshPtr& mesh, const TorusParams& p) {
    const Immersion a = torus(mesh, p);
    const Eigen::Vector3d ex = Eigen::Vector3d::UnitX(), ey = Eigen::Vector3d::UnitY(), ez = Eigen::Vector3d::UnitZ();
    const Eigen::Vector3d zero = Eigen::Vector3d::Zero();
    return {a, rigid_transform(a, rotation(ez, 45.0) * rotation(ex, 45.0), zero),
            rigid_transform(a, rotation(ey, 45.0) * rotation(ez, -45.0), zero)};
}

}  // namespace surfreg
