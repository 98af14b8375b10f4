#include <doctest.h>

#include <climits>
#include <set>

#include "surfreg/domain_mesh.hpp"
#include "surfreg/errors.hpp"

using namespace surfreg;

namespace {

double signed_area(const DomainMesh& m, std::size_t t) {
    // Orientation from the reference gradients: det of the inverse Jacobian.
    const auto& r = m.reference[t];
    const double det = r.grad(1, 0) * r.grad(2, 1) - r.grad(1, 1) * r.grad(2, 0);
    return det > 0.0 ? r.area : -r.area;
}

}  // namespace

TEST_CASE("grid sizes") {
    const DomainMesh plane = build_grid(Topology::PlaneSheet, 1, 1);
    CHECK(plane.triangle_count() == 2);
    CHECK(plane.node_count() == 4);

    const DomainMesh torus = build_grid(Topology::Torus, 30, 30);
    CHECK(torus.triangle_count() == 1800);
    CHECK(torus.node_count() == 900);

    for (int nx : {3, 4, 7})
        for (int ny : {3, 5}) {
            CHECK(build_grid(Topology::PlaneSheet, nx, ny).node_count() == std::size_t((nx + 1) * (ny + 1)));
            CHECK(build_grid(Topology::Cylinder, nx, ny).node_count() == std::size_t(nx * (ny + 1)));
            CHECK(build_grid(Topology::Torus, nx, ny).node_count() == std::size_t(nx * ny));
            CHECK(build_grid(Topology::Torus, nx, ny).triangle_count() == std::size_t(2 * nx * ny));
        }
}

TEST_CASE("small periodic grids are rejected") {
    // Two periodic cells would alias edges; the minimum is three.
    CHECK_THROWS_AS(build_grid(Topology::Cylinder, 2, 2), MeshError);
    CHECK_THROWS_AS(build_grid(Topology::Torus, 3, 2), MeshError);
    CHECK_NOTHROW(build_grid(Topology::Cylinder, 3, 1));
    CHECK_NOTHROW(build_grid(Topology::PlaneSheet, 1, 1));
    CHECK_THROWS_AS(build_grid(Topology::PlaneSheet, 0, 4), MeshError);
    CHECK_THROWS_AS(build_grid(Topology::PlaneSheet, INT_MAX / 2, INT_MAX / 2), MeshError);
}

TEST_CASE("areas, orientation and identification") {
    for (Topology t : {Topology::PlaneSheet, Topology::Cylinder, Topology::Torus})
        for (int n : {3, 4, 9}) {
            const DomainMesh m = build_grid(t, n, n + 1);
            double total = 0.0;
            for (std::size_t k = 0; k < m.triangle_count(); ++k) {
                CHECK(signed_area(m, k) > 0.0);
                total += m.reference[k].area;
                // Gradients of the three hat functions sum to zero.
                CHECK(m.reference[k].grad.colwise().sum().norm() < 1e-12);
                std::set<int> corners(m.triangles[k].begin(), m.triangles[k].end());
                CHECK(corners.size() == 3);
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

            // Every grid point maps to one node, and node representatives map back to themselves.
            std::set<int> hit;
            for (int g : m.dof_map) {
                REQUIRE(g >= 0);
                REQUIRE(std::size_t(g) < m.node_count());
                hit.insert(g);
                CHECK(m.dof_map[std::size_t(m.representative[std::size_t(g)])] == g);
            }
            CHECK(hit.size() == m.node_count());
        }
}

TEST_CASE("periodic wrap") {
    const DomainMesh m = build_grid(Topology::Torus, 4, 5);
    CHECK(m.node_at(4, 0) == m.node_at(0, 0));
    CHECK(m.node_at(-1, 2) == m.node_at(3, 2));
    CHECK(m.node_at(1, 5) == m.node_at(1, 0));
    const DomainMesh c = build_grid(Topology::Cylinder, 4, 5);
    CHECK(c.node_at(4, 3) == c.node_at(0, 3));
    CHECK(c.node_at(0, 5) != c.node_at(0, 0));
}

TEST_CASE("topology names") {
    for (Topology t : {Topology::PlaneSheet, Topology::Cylinder, Topology::Torus})
        CHECK(topology_from_string(to_string(t)) == t);
    CHECK(topology_from_string("plane") == Topology::PlaneSheet);
    CHECK(topology_from_string("cylinder") == Topology::Cylinder);
    CHECK_THROWS(topology_from_string("sphere"));
}
