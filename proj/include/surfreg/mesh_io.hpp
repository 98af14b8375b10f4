#pragma once

#include <filesystem>
#include <iosfwd>
#include <utility>

#include "surfreg/fields.hpp"

namespace surfreg {

// Native text format (one record per line):
//
//   IMESH 1                      (IVEC 1 for velocity fields)
//   <topology> <nx> <ny>
//   <node_count> <tri_count>
//   v <x> <y> <z>                node_count lines, shortest round-trip decimals
//   f <i> <j> <k>                tri_count lines, 0-based unique node indices

void write_mesh(std::ostream& out, const DomainMesh& mesh, const NodalArray& values, bool vector_field = false);
void save_mesh(const DomainMesh& mesh, const Immersion& q, const std::filesystem::path& path);

struct LoadedMesh {
    MeshPtr mesh;
    NodalArray values;
    bool vector_field = false;
};

/// Parses a native file. Throws ParseError (with line number) on malformed
/// records and MismatchError when counts or connectivity disagree with the header.
LoadedMesh read_mesh(std::istream& in);
std::pair<MeshPtr, Immersion> load_mesh(const std::filesystem::path& path);

void save_field(const DomainMesh& mesh, const TangentField& u, const std::filesystem::path& path);
/// Loads an IVEC file; when `mesh` is given the field must match it.
TangentField load_field(const std::filesystem::path& path, const MeshPtr& mesh = nullptr);

/// Wavefront OBJ with 1-based faces. Periodic seams are not duplicated.
void write_obj(std::ostream& out, const Immersion& q);
void export_obj(const Immersion& q, const std::filesystem::path& path);

/// CSV "node,magnitude" of the Euclidean length of each nodal vector.
void write_magnitude_csv(const TangentField& u, const std::filesystem::path& path);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

}  // namespace surfreg
