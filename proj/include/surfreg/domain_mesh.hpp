#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace surfreg {

/// Model parameter domain. All three are charted on [0,1]^2.
enum class Topology {
    PlaneSheet,  ///< [0,1] x [0,1], no identification
    Cylinder,    ///< S^1 x [0,1], periodic in x^1
    Torus,       ///< S^1 x S^1, periodic in x^1 and x^2
};

std::string_view to_string(Topology t);
Topology topology_from_string(std::string_view s);

bool periodic_x(Topology t);
bool periodic_y(Topology t);

/// Constant per-triangle data of the affine reference map: the gradients of
/// the three barycentric basis functions (one row per corner) and the
/// parameter-space area.
struct TriangleReference {
    Eigen::Matrix<double, 3, 2> grad;
    double area = 0.0;
};

/// Structured triangulation of a model domain with periodic node identification.
///
/// Grid points are indexed g = j*(nx+1) + i for 0 <= i <= nx, 0 <= j <= ny.
/// `dof_map[g]` gives the unique node carrying that grid point; points on a
/// periodic seam share the node of their partner at i = 0 (resp. j = 0).
/// Each grid cell is split along its lower-left to upper-right diagonal.
struct DomainMesh {
    Topology topology = Topology::PlaneSheet;
    int nx = 0;
    int ny = 0;

    /// Parameter position of each unique node (its representative grid point).
    std::vector<Eigen::Vector2d> nodes;
    /// Counter-clockwise corner triples of unique node indices.
    std::vector<std::array<int, 3>> triangles;
    /// Grid point -> unique node.
    std::vector<int> dof_map;
    /// Unique node -> representative grid point.
    std::vector<int> representative;
    /// Per-triangle reference gradients, built from unwrapped corner positions.
    std::vector<TriangleReference> reference;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t triangle_count() const { return triangles.size(); }

    int grid_index(int i, int j) const { return j * (nx + 1) + i; }
    /// Unique node at grid point (i, j), with i, j taken modulo the periodic directions.
    int node_at(int i, int j) const;
};

using MeshPtr = std::shared_ptr<const DomainMesh>;

/// Builds the structured mesh. Periodic directions need at least 3 subdivisions.
/// Throws MeshError on invalid or overflowing resolutions.
DomainMesh build_grid(Topology topology, int nx, int ny);

/// Convenience wrapper returning a shared immutable mesh.
MeshPtr make_grid(Topology topology, int nx, int ny);

/// Structural equality (topology, resolution, connectivity).
bool same_discretization(const DomainMesh& a, const DomainMesh& b);

}  // namespace surfreg
