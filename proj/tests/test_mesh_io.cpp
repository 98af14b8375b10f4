#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "surfreg/errors.hpp"
#include "surfreg/fixtures.hpp"
#include "surfreg/mesh_io.hpp"

using namespace surfreg;
namespace fs = std::filesystem;

namespace {

std::string to_text(const Immersion& q) {
    std::ostringstream out;
    write_mesh(out, q.domain(), q.coords);
    return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string join(const std::vector<std::string>& lines) {
    std::string s;
    for (const auto& l : lines) s += l + "\n";
    return s;
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "surfreg_io_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("round trip is exact") {
    const MeshPtr m = make_grid(Topology::Torus, 4, 4);
    Immersion q = torus(m, {});
    q.coords += oracle::random_field(q.node_count(), 1e-3, 1);
    q.coords(0, 0) = 1.0 / 3.0;
    std::istringstream in(to_text(q));
    const LoadedMesh l = read_mesh(in);
    CHECK_FALSE(l.vector_field);
    CHECK(same_discretization(*l.mesh, *m));
    CHECK(l.mesh->reference.size() == m->reference.size());
    CHECK(l.values == q.coords);

    const fs::path file = temp_dir() / "torus.imesh";
    save_mesh(*m, q, file);
    const auto [mesh2, q2] = load_mesh(file);
    CHECK(q2.coords == q.coords);
    CHECK(mesh2->topology == Topology::Torus);
}

TEST_CASE("missing coordinate row") {
    const MeshPtr m = make_grid(Topology::PlaneSheet, 3, 3);
    auto lines = lines_of(to_text(identity_immersion(m)));
    REQUIRE(lines[2] == "16 18");
    lines.erase(lines.begin() + 5);
    std::istringstream in(join(lines));
    CHECK_THROWS_AS(read_mesh(in), MismatchError);
}

TEST_CASE("malformed records carry line numbers") {
    const MeshPtr m = make_grid(Topology::PlaneSheet, 2, 2);
    auto lines = lines_of(to_text(identity_immersion(m)));
    lines[4] = "v 0.5 abc 0";
    std::istringstream in(join(lines));
    try {
        read_mesh(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 5);
    }
    std::istringstream bad_header("IMESH 2\n");
    CHECK_THROWS_AS(read_mesh(bad_header), ParseError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_mesh(empty), ParseError);

    auto swapped = lines_of(to_text(identity_immersion(m)));
    std::string& f = swapped.back();
    REQUIRE(f.rfind("f ", 0) == 0);
    f = "f 0 1 2";
    std::istringstream in2(join(swapped));
    CHECK_THROWS_AS(read_mesh(in2), MismatchError);
}

TEST_CASE("obj export counts") {
    const MeshPtr m = make_grid(Topology::PlaneSheet, 1, 1);
    std::ostringstream out;
    write_obj(out, identity_immersion(m));
    int v = 0, f = 0;
    for (const auto& l : lines_of(out.str())) {
        if (l.rfind("v ", 0) == 0) ++v;
        if (l.rfind("f ", 0) == 0) {
            ++f;
            std::istringstream rec(l.substr(2));
            int a, b, c;
            rec >> a >> b >> c;
            CHECK(std::min({a, b, c}) >= 1);
            CHECK(std::max({a, b, c}) <= 4);
        }
    }
    CHECK(v == 4);
    CHECK(f == 2);
}

TEST_CASE("velocity fields") {
    const MeshPtr m = make_grid(Topology::Cylinder, 4, 3);
    const TangentField u(oracle::random_field(m->node_count(), 1.0, 5));
    const fs::path file = temp_dir() / "u.ivec";
    save_field(*m, u, file);
    CHECK(load_field(file).values == u.values);
    CHECK(load_field(file, m).values == u.values);
    CHECK_THROWS_AS(load_field(file, make_grid(Topology::Cylinder, 4, 4)), MismatchError);
    CHECK_THROWS_AS(load_mesh(file), ParseError);
    CHECK_THROWS_AS(load_mesh(temp_dir() / "does_not_exist.imesh"), IoError);

    const fs::path csv = temp_dir() / "mag.csv";
    write_magnitude_csv(u, csv);
    std::ifstream in(csv);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header == "node,magnitude");
    CHECK(first == "0," + format_double(u.values.row(0).norm()));
}

TEST_CASE("decimal formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_double(x)) == x);
}
