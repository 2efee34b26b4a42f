#pragma once

#include <iosfwd>
#include <string>

#include "willmore/mesh.hpp"

namespace willmore {

// OBJ with 3 or 4 coordinates per "v" line. Four-coordinate files carry a
// "# ambient_dim 4" header; the fourth value is a coordinate, not a weight.
TriMesh read_obj(std::istream& in);
void write_obj(std::ostream& out, const TriMesh& mesh);

// {"ambient_dim": n, "vertices": [[...], ...], "faces": [[i, j, k], ...]}
TriMesh read_mesh_json(std::istream& in);
void write_mesh_json(std::ostream& out, const TriMesh& mesh);

// Dispatch on extension: .obj or .json.
TriMesh load_mesh(const std::string& path);
void save_mesh(const std::string& path, const TriMesh& mesh);

// Shortest round-trip formatting used by every writer.
std::string format_double(double x);

}  // namespace willmore
