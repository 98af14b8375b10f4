#include <doctest.h>

#include <numbers>
#include <sstream>

#include "surfreg/errors.hpp"
#include "surfreg/fixtures.hpp"
#include "surfreg/mesh_io.hpp"
#include "surfreg/surface_geometry.hpp"

using namespace surfreg;

namespace {

std::string text(const Immersion& q) {
    std::ostringstream out;
    write_mesh(out, q.domain(), q.coords);
    return out.str();
}

}  // namespace

TEST_CASE("straight cylinder") {
    const MeshPtr m = make_grid(Topology::Cylinder, 30, 30);
    const Immersion q = straight_cylinder(m);
    CHECK(m->triangle_count() == 1800);
    for (std::size_t a = 0; a < q.node_count(); ++a) {
        const auto r = q.coords.row(Eigen::Index(a));
        CHECK(std::hypot(r(0), r(1)) == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(r(2) >= 0.0);
        CHECK(r(2) <= 1.0);
    }
    // Lateral area of the inscribed prism.
    CHECK(surface_area(q) == doctest::Approx(30 * 2 * 0.25 * std::sin(std::numbers::pi / 30)).epsilon(1e-12));
}

TEST_CASE("degenerate bend equals the straight cylinder") {
    const MeshPtr m = make_grid(Topology::Cylinder, 8, 6);
    CylinderParams p;
    p.bend_degrees = 0.0;
    p.ripple_amplitude = 0.0;
    CHECK(text(bent_cylinder(m, p)) == text(straight_cylinder(m)));
}

TEST_CASE("bent cylinder keeps its axis length") {
    const MeshPtr m = make_grid(Topology::Cylinder, 16, 16);
    const Immersion q = bent_cylinder(m, {0.25, 1.0, 90.0, 5, 0.02});
    CHECK(check_regularity(q, 1e-8).regular());
    // The top ring is turned by the bend angle: its centroid sits off the z axis.
    Eigen::RowVector3d top = Eigen::RowVector3d::Zero();
    for (int i = 0; i < 16; ++i) top += q.coords.row(m->node_at(i, 16));
    top /= 16.0;
    CHECK(top(0) > 0.3);
    CHECK(text(bent_cylinder(m, {0.25, 1.0, 90.0, 5, 0.02})) == text(q));
}

TEST_CASE("tori and vases") {
    const MeshPtr t = make_grid(Topology::Torus, 12, 8);
    const auto tri = triangle_tori(t, {0.35, 0.15, 0.3});
    const double area = surface_area(tri[0]);
    for (const auto& q : tri) {
        CHECK(surface_area(q) == doctest::Approx(area).epsilon(1e-12));
        CHECK(check_regularity(q, 1e-8).regular());
    }
    CHECK((tri[0].coords - tri[1].coords).norm() > 0.1);

    const MeshPtr c = make_grid(Topology::Cylinder, 12, 12);
    const auto params = default_vases();
    CHECK(params.size() == 5);
    for (const auto& p : params) CHECK(check_regularity(vase(c, p), 1e-8).regular());
    CHECK_THROWS_AS(vase(t, params[0]), InvalidArgument);
    CHECK_THROWS_AS(rotation(Eigen::Vector3d::Zero(), 10.0), InvalidArgument);
}
