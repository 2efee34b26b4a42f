#include "willmore/mesh_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace willmore {

std::string format_double(double x) {
  // Shortest form that round-trips.
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

TriMesh read_obj(std::istream& in) {
  std::vector<Vec4> pos;
  std::vector<Face> faces;
  int declared = 0, seen = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "#") {
      std::string key;
      int d;
      if (ls >> key >> d && key == "ambient_dim") declared = d;
    } else if (tag == "v") {
      std::vector<double> xs;
      double x;
      while (ls >> x) xs.push_back(x);
      int n = static_cast<int>(xs.size());
      if (n != 3 && n != 4)
        throw ValidationError("line " + std::to_string(lineno) + ": vertex needs 3 or 4 coordinates");
      if (seen == 0) seen = n;
      if (n != seen) throw ValidationError("mixed ambient dimension in OBJ vertices");
      pos.emplace_back(xs[0], xs[1], xs[2], n == 4 ? xs[3] : 0.0);
    } else if (tag == "f") {
      std::vector<int> ids;
      std::string tok;
      while (ls >> tok) {
        int id = 0;
        try {
          id = std::stoi(tok.substr(0, tok.find('/')));
        } catch (const std::exception&) {
          throw ValidationError("line " + std::to_string(lineno) + ": bad face index " + tok);
        }
        if (id == 0) throw ValidationError("line " + std::to_string(lineno) + ": face index 0");
        ids.push_back(id < 0 ? static_cast<int>(pos.size()) + id : id - 1);
      }
      if (ids.size() != 3)
        throw ValidationError("line " + std::to_string(lineno) + ": only triangular faces are supported");
      faces.push_back({ids[0], ids[1], ids[2]});
    }
  }
  if (declared != 0 && seen != 0 && declared != seen)
    throw ValidationError("mixed ambient dimension: header and vertex data disagree");
  int dim = seen != 0 ? seen : (declared != 0 ? declared : 3);
  return TriMesh::create(dim, std::move(pos), std::move(faces));
}

void write_obj(std::ostream& out, const TriMesh& mesh) {
  const int d = mesh.ambient_dim();
  out << "# ambient_dim " << d << "\n";
  for (const auto& p : mesh.positions()) {
    out << "v";
    for (int k = 0; k < d; ++k) out << ' ' << format_double(p[k]);
    out << "\n";
  }
  for (const auto& f : mesh.faces()) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << "\n";
}

TriMesh read_mesh_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed mesh JSON: ") + e.what());
  }
  if (!j.contains("ambient_dim") || !j.contains("vertices") || !j.contains("faces"))
    throw ValidationError("mesh JSON needs ambient_dim, vertices and faces");
  int dim = j["ambient_dim"].get<int>();
  std::vector<Vec4> pos;
  for (const auto& v : j["vertices"]) {
    if (static_cast<int>(v.size()) != dim)
      throw ValidationError("mixed ambient dimension in mesh JSON");
    Vec4 p = Vec4::Zero();
    for (int k = 0; k < dim; ++k) p[k] = v[k].get<double>();
    pos.push_back(p);
  }
  std::vector<Face> faces;
  for (const auto& f : j["faces"]) {
    if (f.size() != 3) throw ValidationError("only triangular faces are supported");
    faces.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
  }
  return TriMesh::create(dim, std::move(pos), std::move(faces));
}

void write_mesh_json(std::ostream& out, const TriMesh& mesh) {
  const int d = mesh.ambient_dim();
  out << "{\"ambient_dim\": " << d << ", \"vertices\": [";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    out << (v ? ", [" : "[");
    for (int k = 0; k < d; ++k) out << (k ? ", " : "") << format_double(mesh.position(v)[k]);
    out << "]";
  }
  out << "], \"faces\": [";
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& fc = mesh.face(f);
    out << (f ? ", [" : "[") << fc[0] << ", " << fc[1] << ", " << fc[2] << "]";
  }
  out << "]}\n";
}

namespace {
bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}
}  // namespace

TriMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open mesh file " + path);
  if (ends_with(path, ".json")) return read_mesh_json(in);
  if (ends_with(path, ".obj")) return read_obj(in);
  throw ValidationError("unknown mesh format (expected .obj or .json): " + path);
}

void save_mesh(const std::string& path, const TriMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write mesh file " + path);
  if (ends_with(path, ".json"))
    write_mesh_json(out, mesh);
  else
    write_obj(out, mesh);
}

}  // namespace willmore
