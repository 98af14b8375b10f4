#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "surfreg/fields.hpp"

// Parametric test shapes. The bent cylinder, asymmetric tori and vases are
// reconstructions: every parameter is explicit and can be set from a config.

namespace surfreg {

/// Cylinder over the cylinder domain: x^1 -> angle, x^2 -> arc length of the
/// axis. The axis is bent in the xz-plane along a circular arc of total angle
/// `bend_degrees`; the radius carries `ripples` sinusoidal periods of
/// amplitude `ripple_amplitude` along the axis. With zero bend and amplitude
/// this is exactly the straight cylinder.
struct CylinderParams {
    double radius = 0.25;
    double height = 1.0;
    double bend_degrees = 0.0;
    int ripples = 5;
    double ripple_amplitude = 0.0;
};

Immersion bent_cylinder(const MeshPtr& mesh, const CylinderParams& p);
Immersion straight_cylinder(const MeshPtr& mesh, double radius = 0.25, double height = 1.0);

/// Torus over the torus domain with major radius `major` and tube radius
/// minor * (1 + asymmetry * cos(2 pi x^1)).
struct TorusParams {
    double major = 0.35;
    double minor = 0.15;
    double asymmetry = 0.0;
};

Immersion torus(const MeshPtr& mesh, const TorusParams& p);

/// Three rigidly rotated copies of one asymmetric torus, the vertices of the
/// triangle experiment: A = T, B = Rz(45) Rx(45) T, C = Ry(45) Rz(-45) T.
std::array<Immersion, 3> triangle_tori(const MeshPtr& mesh, const TorusParams& p);

/// Open vase: surface of revolution over the cylinder domain with radius
/// radius * (1 + bulge sin(pi z) + waist sin(2 pi z) + flare sin(3 pi z)), z = x^2.
struct VaseParams {
    double radius = 0.25;
    double height = 1.0;
    double bulge = 0.0;
    double waist = 0.0;
    double flare = 0.0;
};

Immersion vase(const MeshPtr& mesh, const VaseParams& p);

/// The five vase parameter sets used by the mean experiment.
std::vector<VaseParams> default_vases();

/// Rotation by `degrees` about `axis` (normalized internally).
Eigen::Matrix3d rotation(const Eigen::Vector3d& axis, double degrees);

/// x -> R x + b applied to every node.
Immersion rigid_transform(const Immersion& q, const Eigen::Matrix3d& rot, const Eigen::Vector3d& shift);

}  // namespace surfreg
