#pragma once

#include <vector>

#include <Eigen/Core>

#include "surfreg/fields.hpp"

namespace surfreg {

/// First fundamental form data of one linear element. For piecewise-linear
/// immersions the derivative dq is constant on the triangle, so these values
/// are exact per element.
struct ElementGeometry {
    Eigen::Matrix<double, 3, 2> dq;  ///< columns are dq/dx^1, dq/dx^2
    Eigen::Matrix2d g;               ///< g_ij = dq_i . dq_j
    Eigen::Matrix2d g_inv;           ///< g^ij
    double vol = 0.0;                ///< sqrt(det g)
};

/// Nodal corner values of a triangle as a 3x3 matrix (one column per corner).
Eigen::Matrix3d corner_values(const NodalArray& values, const std::array<int, 3>& tri);

/// Derivative of the linear interpolant on triangle `t`: 3x2, columns d/dx^1, d/dx^2.
Eigen::Matrix<double, 3, 2> element_derivative(const DomainMesh& mesh, const NodalArray& values,
                                               std::size_t t);

/// Throws DegenerateElementError when det g <= eps_reg^2.
ElementGeometry element_geometry(const Immersion& q, std::size_t tri, double eps_reg = 0.0);

/// Geometry from a precomputed derivative; used by the variation kernels.
ElementGeometry geometry_from_derivative(const Eigen::Matrix<double, 3, 2>& dq, std::size_t tri,
                                         double eps_reg);

/// Triangles whose volume density vol(g) does not exceed eps_reg.
struct RegularityReport {
    std::vector<std::size_t> offending;
    double min_vol = 0.0;

    bool regular() const { return offending.empty(); }
};

/// Reports every triangle with vol(g) <= eps_reg. Requires eps_reg > 0.
RegularityReport check_regularity(const Immersion& q, double eps_reg);

/// Default threshold: 1e-10 times the median element volume density.
double default_regularity_threshold(const Immersion& q);

/// Surface area sum_T vol(g_T) * |T|.
double surface_area(const Immersion& q);

}  // namespace surfreg
