#include "willmore/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "willmore/summation.hpp"

namespace willmore {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double face_area(const Vec4& a, const Vec4& b, const Vec4& c) {
  Vec4 u = b - a, v = c - a;
  double g = u.squaredNorm() * v.squaredNorm() - u.dot(v) * u.dot(v);
  return 0.5 * std::sqrt(std::max(g, 0.0));
}

}  // namespace

TriMesh TriMesh::create(int ambient_dim, std::vector<Vec4> positions,
                        std::vector<Face> faces) {
  if (ambient_dim != 3 && ambient_dim != 4)
    throw ValidationError("ambient dimension must be 3 or 4");
  if (positions.empty() || faces.empty())
    throw ValidationError("empty mesh");
  TriMesh m;
  m.ambient_dim_ = ambient_dim;
  m.positions_ = std::move(positions);
  m.faces_ = std::move(faces);
  if (ambient_dim == 3)
    for (const auto& p : m.positions_)
      if (p[3] != 0.0)
        throw ValidationError("mixed ambient dimension: R^3 mesh with nonzero 4th coordinate");
  m.build_connectivity();
  m.validate_geometry();
  return m;
}

void TriMesh::build_connectivity() {
  const int nv = num_vertices();
  const int nf = num_faces();
  for (const auto& f : faces_) {
    for (int k = 0; k < 3; ++k)
      if (f[k] < 0 || f[k] >= nv) throw ValidationError("face index out of range");
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
      throw ValidationError("face with repeated vertex");
  }

  // Directed half-edges opposite each corner; orientation check per edge.
  std::unordered_map<std::uint64_t, int> index;
  index.reserve(3 * faces_.size());
  face_edges_.assign(nf, {-1, -1, -1});
  std::vector<std::array<int, 2>> ef;
  std::vector<std::array<int, 2>> dir_count;  // (#a->b with a<b, #b->a)
  for (int f = 0; f < nf; ++f) {
    for (int k = 0; k < 3; ++k) {
      int a = faces_[f][(k + 1) % 3], b = faces_[f][(k + 2) % 3];
      auto key = edge_key(a, b);
      auto [it, inserted] = index.try_emplace(key, static_cast<int>(edges_.size()));
      int e = it->second;
      if (inserted) {
        edges_.push_back({std::min(a, b), std::max(a, b)});
        ef.push_back({-1, -1});
        dir_count.push_back({0, 0});
      }
      if (ef[e][0] < 0) {
        ef[e][0] = f;
      } else if (ef[e][1] < 0) {
        ef[e][1] = f;
      } else {
        throw ValidationError("non-manifold edge (" + std::to_string(a) + "," +
                              std::to_string(b) + ") shared by more than two faces");
      }
      dir_count[e][a < b ? 0 : 1] += 1;
      face_edges_[f][k] = e;
    }
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (ef[e][1] < 0)
      throw ValidationError("open surface: boundary edge (" + std::to_string(edges_[e].v0) + "," +
                            std::to_string(edges_[e].v1) + ")");
    if (dir_count[e][0] != 1 || dir_count[e][1] != 1)
      throw ValidationError("inconsistent face orientation at edge (" +
                            std::to_string(edges_[e].v0) + "," +
                            std::to_string(edges_[e].v1) + ")");
  }
  edge_faces_ = std::move(ef);

  // Vertex -> faces, vertex -> neighbors (CSR).
  vf_offset_.assign(nv + 1, 0);
  for (const auto& f : faces_)
    for (int v : f) vf_offset_[v + 1]++;
  for (int v = 0; v < nv; ++v) vf_offset_[v + 1] += vf_offset_[v];
  vf_.assign(vf_offset_[nv], 0);
  {
    std::vector<int> fill(vf_offset_.begin(), vf_offset_.end() - 1);
    for (int f = 0; f < nf; ++f)
      for (int v : faces_[f]) vf_[fill[v]++] = f;
  }
  for (int v = 0; v < nv; ++v)
    if (vf_offset_[v + 1] == vf_offset_[v])
      throw ValidationError("unreferenced vertex " + std::to_string(v));

  nbr_offset_.assign(nv + 1, 0);
  for (const auto& e : edges_) {
    nbr_offset_[e.v0 + 1]++;
    nbr_offset_[e.v1 + 1]++;
  }
  for (int v = 0; v < nv; ++v) nbr_offset_[v + 1] += nbr_offset_[v];
  nbr_.assign(nbr_offset_[nv], 0);
  {
    std::vector<int> fill(nbr_offset_.begin(), nbr_offset_.end() - 1);
    for (const auto& e : edges_) {
      nbr_[fill[e.v0]++] = e.v1;
      nbr_[fill[e.v1]++] = e.v0;
    }
  }
  for (int v = 0; v < nv; ++v)
    std::sort(nbr_.begin() + nbr_offset_[v], nbr_.begin() + nbr_offset_[v + 1]);

  // Each vertex link must be a single cycle.
  for (int v = 0; v < nv; ++v) {
    auto fs = vertex_faces(v);
    auto corner = [&](int f) {
      const auto& fc = faces_[f];
      return fc[0] == v ? 0 : (fc[1] == v ? 1 : 2);
    };
    int start = fs[0], cur = start, steps = 0;
    do {
      int next_v = faces_[cur][(corner(cur) + 1) % 3];
      int found = -1;
      for (int g : fs)
        if (faces_[g][(corner(g) + 2) % 3] == next_v) {
          found = g;
          break;
        }
      if (found < 0) throw ValidationError("non-manifold vertex " + std::to_string(v));
      cur = found;
      ++steps;
    } while (cur != start && steps <= static_cast<int>(fs.size()));
    if (steps != static_cast<int>(fs.size()))
      throw ValidationError("non-manifold vertex " + std::to_string(v));
  }

  // Connectedness.
  std::vector<char> seen(nv, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : vertex_neighbors(v))
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  if (count != nv) throw ValidationError("mesh is not connected");

  int chi = euler_characteristic();
  if (chi > 2 || (chi % 2) != 0)
    throw ValidationError("Euler characteristic " + std::to_string(chi) +
                          " does not describe a closed orientable surface");
}

void TriMesh::validate_geometry() {
  Vec4 lo = positions_[0], hi = positions_[0];
  for (const auto& p : positions_) {
    if (!p.allFinite()) throw ValidationError("non-finite vertex position");
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  diameter_ = (hi - lo).norm();
  const double floor = 1e-14 * diameter_ * diameter_;
  for (int f = 0; f < num_faces(); ++f) {
    const auto& fc = faces_[f];
    if (face_area(positions_[fc[0]], positions_[fc[1]], positions_[fc[2]]) <= floor)
      throw ValidationError("degenerate face " + std::to_string(f));
  }
}

std::span<const int> TriMesh::vertex_neighbors(int v) const {
  return {nbr_.data() + nbr_offset_[v],
          static_cast<std::size_t>(nbr_offset_[v + 1] - nbr_offset_[v])};
}

std::span<const int> TriMesh::vertex_faces(int v) const {
  return {vf_.data() + vf_offset_[v],
          static_cast<std::size_t>(vf_offset_[v + 1] - vf_offset_[v])};
}

int TriMesh::find_edge(int a, int b) const {
  for (int f : vertex_faces(a))
    for (int k = 0; k < 3; ++k) {
      const auto& e = edges_[face_edges_[f][k]];
      if ((e.v0 == a && e.v1 == b) || (e.v0 == b && e.v1 == a)) return face_edges_[f][k];
    }
  return -1;
}

double TriMesh::mean_edge_length() const {
  NeumaierSum s;
  for (const auto& e : edges_) s.add((positions_[e.v0] - positions_[e.v1]).norm());
  return s.value() / num_edges();
}

TriMesh TriMesh::with_positions(std::vector<Vec4> positions) const {
  if (positions.size() != positions_.size())
    throw ValidationError("position count does not match connectivity");
  TriMesh m = *this;
  m.positions_ = std::move(positions);
  if (ambient_dim_ == 3)
    for (const auto& p : m.positions_)
      if (p[3] != 0.0) throw ValidationError("mixed ambient dimension");
  m.validate_geometry();
  return m;
}

int genus(const TriMesh& mesh) { return mesh.genus(); }

TriMesh embed_in_r4(const TriMesh& mesh) {
  std::vector<Vec4> p(mesh.positions().begin(), mesh.positions().end());
  return TriMesh::create(4, std::move(p),
                         std::vector<Face>(mesh.faces().begin(), mesh.faces().end()));
}

double signed_volume(const TriMesh& mesh) {
  NeumaierSum s;
  for (const auto& f : mesh.faces()) {
    Vec3 a = mesh.position(f[0]).head<3>(), b = mesh.position(f[1]).head<3>(),
         c = mesh.position(f[2]).head<3>();
    s.add(a.dot(b.cross(c)) / 6.0);
  }
  return s.value();
}

}  // namespace willmore
