#include "surfreg/mesh_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "surfreg/errors.hpp"

namespace surfreg {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_mesh(std::ostream& out, const DomainMesh& mesh, const NodalArray& values, bool vector_field) {
    require_nodes(mesh, values.rows(), "mesh output");
    out << (vector_field ? "IVEC 1\n" : "IMESH 1\n");
    out << to_string(mesh.topology) << ' ' << mesh.nx << ' ' << mesh.ny << '\n';
    out << mesh.node_count() << ' ' << mesh.triangle_count() << '\n';
    for (Eigen::Index a = 0; a < values.rows(); ++a)
        out << "v " << format_double(values(a, 0)) << ' ' << format_double(values(a, 1)) << ' '
            << format_double(values(a, 2)) << '\n';
    for (const auto& t : mesh.triangles) out << "f " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return in;
}

// Splits a line into whitespace-separated tokens.
std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <typename T>
T parse_number(std::string_view tok, std::size_t line) {
    T value{};
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ParseError(line, "invalid number '" + std::string(tok) + "'");
    return value;
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++number_;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    }
    std::size_t number() const { return number_; }

private:
    std::istream& in_;
    std::size_t number_ = 0;
};

}  // namespace

void save_mesh(const DomainMesh& mesh, const Immersion& q, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_mesh(out, mesh, q.coords, false);
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

LoadedMesh read_mesh(std::istream& in) {
    LineReader reader(in);
    std::string line;

    if (!reader.next(line)) throw ParseError(reader.number() + 1, "empty file");
    auto tok = tokens(line);
    LoadedMesh loaded;
    if (tok.size() != 2 || (tok[0] != "IMESH" && tok[0] != "IVEC") || tok[1] != "1")
        throw ParseError(reader.number(), "expected 'IMESH 1' or 'IVEC 1'");
    loaded.vector_field = tok[0] == "IVEC";

    if (!reader.next(line)) throw ParseError(reader.number() + 1, "missing topology line");
    tok = tokens(line);
    if (tok.size() != 3) throw ParseError(reader.number(), "expected '<topology> <nx> <ny>'");
    Topology topology;
    try {
        topology = topology_from_string(tok[0]);
    } catch (const InvalidArgument&) {
        throw ParseError(reader.number(), "unknown topology '" + std::string(tok[0]) + "'");
    }
    const int nx = parse_number<int>(tok[1], reader.number());
    const int ny = parse_number<int>(tok[2], reader.number());
    const std::size_t topo_line = reader.number();

    if (!reader.next(line)) throw ParseError(reader.number() + 1, "missing count line");
    tok = tokens(line);
    if (tok.size() != 2) throw ParseError(reader.number(), "expected '<node_count> <tri_count>'");
    const auto node_count = parse_number<std::size_t>(tok[0], reader.number());
    const auto tri_count = parse_number<std::size_t>(tok[1], reader.number());

    DomainMesh mesh;
    try {
        mesh = build_grid(topology, nx, ny);
    } catch (const MeshError& e) {
        throw ParseError(topo_line, e.what());
    }
    if (node_count != mesh.node_count() || tri_count != mesh.triangle_count())
        throw MismatchError("header counts " + std::to_string(node_count) + "/" + std::to_string(tri_count) +
                            " do not match a " + std::string(to_string(topology)) + " " + std::to_string(nx) +
                            "x" + std::to_string(ny) + " grid");

    std::vector<Eigen::Vector3d> rows;
    std::vector<std::array<int, 3>> faces;
    rows.reserve(node_count);
    faces.reserve(tri_count);
    while (reader.next(line)) {
        tok = tokens(line);
        if (tok[0] == "v") {
            if (!faces.empty()) throw ParseError(reader.number(), "vertex record after face records");
            if (tok.size() != 4) throw ParseError(reader.number(), "expected 'v <x> <y> <z>'");
            rows.emplace_back(parse_number<double>(tok[1], reader.number()),
                              parse_number<double>(tok[2], reader.number()),
                              parse_number<double>(tok[3], reader.number()));
        } else if (tok[0] == "f") {
            if (tok.size() != 4) throw ParseError(reader.number(), "expected 'f <i> <j> <k>'");
            faces.push_back({parse_number<int>(tok[1], reader.number()), parse_number<int>(tok[2], reader.number()),
                             parse_number<int>(tok[3], reader.number())});
        } else {
            throw ParseError(reader.number(), "unknown record '" + std::string(tok[0]) + "'");
        }
    }
    if (rows.size() != node_count)
        throw MismatchError("header declares " + std::to_string(node_count) + " nodes but file lists " +
                            std::to_string(rows.size()) + " coordinate rows");
    if (faces.size() != tri_count)
        throw MismatchError("header declares " + std::to_string(tri_count) + " triangles but file lists " +
                            std::to_string(faces.size()));
    if (faces != mesh.triangles) throw MismatchError("triangle connectivity differs from the structured grid");

    loaded.values.resize(Eigen::Index(node_count), 3);
    for (std::size_t a = 0; a < node_count; ++a) loaded.values.row(Eigen::Index(a)) = rows[a].transpose();
    loaded.mesh = std::make_shared<const DomainMesh>(std::move(mesh));
    return loaded;
}

std::pair<MeshPtr, Immersion> load_mesh(const std::filesystem::path& path) {
    auto in = open_in(path);
    LoadedMesh loaded = read_mesh(in);
    if (loaded.vector_field) throw ParseError(1, "expected a mesh file, found a velocity field");
    MeshPtr mesh = loaded.mesh;
    return {mesh, Immersion(mesh, std::move(loaded.values))};
}

void save_field(const DomainMesh& mesh, const TangentField& u, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_mesh(out, mesh, u.values, true);
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

TangentField load_field(const std::filesystem::path& path, const MeshPtr& mesh) {
    auto in = open_in(path);
    LoadedMesh loaded = read_mesh(in);
    if (!loaded.vector_field) throw ParseError(1, "expected a velocity field, found a mesh file");
    if (mesh && !same_discretization(*mesh, *loaded.mesh))
        throw MismatchError("velocity field discretization differs from the mesh");
    return TangentField(std::move(loaded.values));
}

void write_obj(std::ostream& out, const Immersion& q) {
    for (Eigen::Index a = 0; a < q.coords.rows(); ++a)
        out << "v " << format_double(q.coords(a, 0)) << ' ' << format_double(q.coords(a, 1)) << ' '
            << format_double(q.coords(a, 2)) << '\n';
    for (const auto& t : q.domain().triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void export_obj(const Immersion& q, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_obj(out, q);
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_magnitude_csv(const TangentField& u, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "node,magnitude\n";
    for (Eigen::Index a = 0; a < u.values.rows(); ++a) out << a << ',' << format_double(u.values.row(a).norm()) << '\n';
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace surfreg
