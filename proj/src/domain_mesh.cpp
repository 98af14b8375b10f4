#include "surfreg/domain_mesh.hpp"

#include <limits>

#include <Eigen/Dense>

#include "surfreg/errors.hpp"

namespace surfreg {

std::string_view to_string(Topology t) {
    switch (t) {
        case Topology::PlaneSheet: return "PlaneSheet";
        case Topology::Cylinder: return "Cylinder";
        case Topology::Torus: return "Torus";
    }
    return "?";
}

Topology topology_from_string(std::string_view s) {
    if (s == "PlaneSheet" || s == "plane") return Topology::PlaneSheet;
    if (s == "Cylinder" || s == "cylinder") return Topology::Cylinder;
    if (s == "Torus" || s == "torus") return Topology::Torus;
    throw InvalidArgument("unknown topology '" + std::string(s) + "'");
}

bool periodic_x(Topology t) { return t != Topology::PlaneSheet; }
bool periodic_y(Topology t) { return t == Topology::Torus; }

int DomainMesh::node_at(int i, int j) const {
    if (periodic_x(topology)) i = ((i % nx) + nx) % nx;
    if (periodic_y(topology)) j = ((j % ny) + ny) % ny;
    return dof_map[static_cast<std::size_t>(grid_index(i, j))];
}

namespace {

TriangleReference make_reference(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                 const Eigen::Vector2d& c) {
    // Columns are the edge vectors of the affine map from the unit triangle.
    Eigen::Matrix2d edges;
    edges.col(0) = b - a;
    edges.col(1) = c - a;
    const Eigen::Matrix2d inv = edges.inverse();
    // grad(phi_b) and grad(phi_c) are the rows of inv; phi_a = 1 - phi_b - phi_c.
    TriangleReference ref;
    ref.grad.row(1) = inv.row(0);
    ref.grad.row(2) = inv.row(1);
    ref.grad.row(0) = -(inv.row(0) + inv.row(1));
    ref.area = 0.5 * edges.determinant();
    return ref;
}

}  // namespace

DomainMesh build_grid(Topology topology, int nx, int ny) {
    if (nx < 1 || ny < 1) throw MeshError("grid resolutions must be positive");
    if (periodic_x(topology) && nx < 3)
        throw MeshError("resolution too small: periodic direction x needs nx >= 3");
    if (periodic_y(topology) && ny < 3)
        throw MeshError("resolution too small: periodic direction y needs ny >= 3");

    const std::int64_t grid_points = (std::int64_t{nx} + 1) * (std::int64_t{ny} + 1);
    const std::int64_t tri_count = 2 * std::int64_t{nx} * std::int64_t{ny};
    constexpr std::int64_t limit = std::numeric_limits<int>::max() / 3;
    if (grid_points > limit || tri_count > limit)
        throw MeshError("mesh resolution overflows the node index type");

    DomainMesh mesh;
    mesh.topology = topology;
    mesh.nx = nx;
    mesh.ny = ny;
    mesh.dof_map.assign(static_cast<std::size_t>(grid_points), -1);

    const bool px = periodic_x(topology);
    const bool py = periodic_y(topology);
    const int ix_end = px ? nx : nx + 1;
    const int jy_end = py ? ny : ny + 1;

    for (int j = 0; j < jy_end; ++j) {
        for (int i = 0; i < ix_end; ++i) {
            const int g = mesh.grid_index(i, j);
            mesh.dof_map[g] = static_cast<int>(mesh.nodes.size());
            mesh.representative.push_back(g);
            mesh.nodes.emplace_back(double(i) / nx, double(j) / ny);
        }
    }
    // Seam points copy the node of their partner on the opposite side.
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const int g = mesh.grid_index(i, j);
            if (mesh.dof_map[g] >= 0) continue;
            const int si = (px && i == nx) ? 0 : i;
            const int sj = (py && j == ny) ? 0 : j;
            mesh.dof_map[g] = mesh.dof_map[mesh.grid_index(si, sj)];
        }
    }

    mesh.triangles.reserve(static_cast<std::size_t>(tri_count));
    mesh.reference.reserve(static_cast<std::size_t>(tri_count));
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Eigen::Vector2d p00(double(i) / nx, double(j) / ny);
            const Eigen::Vector2d p10(double(i + 1) / nx, double(j) / ny);
            const Eigen::Vector2d p11(double(i + 1) / nx, double(j + 1) / ny);
            const Eigen::Vector2d p01(double(i) / nx, double(j + 1) / ny);
            const int n00 = mesh.dof_map[mesh.grid_index(i, j)];
            const int n10 = mesh.dof_map[mesh.grid_index(i + 1, j)];
            const int n11 = mesh.dof_map[mesh.grid_index(i + 1, j + 1)];
            const int n01 = mesh.dof_map[mesh.grid_index(i, j + 1)];
            mesh.triangles.push_back({n00, n10, n11});
            mesh.reference.push_back(make_reference(p00, p10, p11));
            mesh.triangles.push_back({n00, n11, n01});
            mesh.reference.push_back(make_reference(p00, p11, p01));
        }
    }
    return mesh;
}

MeshPtr make_grid(Topology topology, int nx, int ny) {
    return std::make_shared<const DomainMesh>(build_grid(topology, nx, ny));
}

bool same_discretization(const DomainMesh& a, const DomainMesh& b) {
    return a.topology == b.topology && a.nx == b.nx && a.ny == b.ny &&
           a.nodes.size() == b.nodes.size() && a.triangles == b.triangles;
}

}  // namespace surfreg
