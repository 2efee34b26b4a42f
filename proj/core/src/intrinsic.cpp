#include "willmore/intrinsic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "willmore/summation.hpp"

namespace willmore {

double corner_angle(double a, double b, double c) {
  double p = (a - b + c) * (a + b - c);
  double q = (a + b + c) * (-a + b + c);
  if (!(p > 0.0) || !(q > 0.0)) throw ValidationError("triangle inequality violated");
  return 2.0 * std::atan2(std::sqrt(p), std::sqrt(q));
}

double triangle_area(double a, double b, double c) {
  // Heron in the ordering that avoids cancellation.
  if (a < b) std::swap(a, b);
  if (a < c) std::swap(a, c);
  if (b < c) std::swap(b, c);
  double g = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  if (!(g > 0.0)) throw ValidationError("triangle inequality violated");
  return 0.25 * std::sqrt(g);
}

std::vector<double> edge_lengths(const TriMesh& mesh) {
  std::vector<double> l(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto& ed = mesh.edge(e);
    l[e] = (mesh.position(ed.v0) - mesh.position(ed.v1)).norm();
  }
  return l;
}

IntrinsicGeometry intrinsic_geometry(const TriMesh& mesh) {
  auto l = edge_lengths(mesh);
  return intrinsic_geometry(mesh, l);
}

IntrinsicGeometry intrinsic_geometry(const TriMesh& mesh, std::span<const double> lengths) {
  if (static_cast<int>(lengths.size()) != mesh.num_edges())
    throw ValidationError("edge length count does not match mesh");
  const int nf = mesh.num_faces(), nv = mesh.num_vertices(), ne = mesh.num_edges();
  IntrinsicGeometry g;
  g.edge_length.assign(lengths.begin(), lengths.end());
  g.angle.resize(nf);
  g.cot.resize(nf);
  g.face_area.resize(nf);
  g.vertex_area.assign(nv, 0.0);
  g.edge_weight.assign(ne, 0.0);

  constexpr double kMaxCot = 1e8;
  for (int f = 0; f < nf; ++f) {
    const auto& fe = mesh.face_edges(f);
    double l0 = lengths[fe[0]], l1 = lengths[fe[1]], l2 = lengths[fe[2]];
    double area = triangle_area(l0, l1, l2);
    g.face_area[f] = area;
    std::array<double, 3> len{l0, l1, l2};
    for (int k = 0; k < 3; ++k) {
      double a = len[k], b = len[(k + 1) % 3], c = len[(k + 2) % 3];
      g.angle[f][k] = corner_angle(a, b, c);
      double ct = (b * b + c * c - a * a) / (4.0 * area);
      if (std::abs(ct) > kMaxCot)
        throw ValidationError("mesh quality: near-degenerate triangle " + std::to_string(f));
      g.cot[f][k] = ct;
    }
  }

  // Edge weights, accumulated in face order.
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k) g.edge_weight[mesh.face_edges(f)[k]] += 0.5 * g.cot[f][k];

  // Mixed Voronoi areas.
  const double half_pi = 0.5 * std::numbers::pi;
  std::vector<NeumaierSum> va(nv);
  for (int f = 0; f < nf; ++f) {
    const auto& fc = mesh.face(f);
    const auto& ang = g.angle[f];
    const double area = g.face_area[f];
    int obtuse = -1;
    for (int k = 0; k < 3; ++k)
      if (ang[k] >= half_pi) obtuse = k;
    for (int k = 0; k < 3; ++k) {
      double contrib;
      if (obtuse < 0) {
        int j = (k + 1) % 3, m = (k + 2) % 3;
        double lj = lengths[mesh.face_edges(f)[j]], lm = lengths[mesh.face_edges(f)[m]];
        contrib = (lj * lj * g.cot[f][j] + lm * lm * g.cot[f][m]) / 8.0;
      } else {
        contrib = (k == obtuse) ? 0.5 * area : 0.25 * area;
      }
      va[fc[k]].add(contrib);
    }
  }
  for (int v = 0; v < nv; ++v) g.vertex_area[v] = va[v].value();

  g.angle_defect.assign(nv, 0.0);
  for (int v = 0; v < nv; ++v) {
    NeumaierSum s;
    s.add(2.0 * std::numbers::pi);
    for (int f : mesh.vertex_faces(v)) {
      const auto& fc = mesh.face(f);
      int k = fc[0] == v ? 0 : (fc[1] == v ? 1 : 2);
      s.add(-g.angle[f][k]);
    }
    g.angle_defect[v] = s.value();
  }
  g.total_area = compensated_sum(g.face_area);
  return g;
}

Eigen::SparseMatrix<double> cotan_laplacian(const TriMesh& mesh, const IntrinsicGeometry& geo) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(4 * mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto& ed = mesh.edge(e);
    double w = geo.edge_weight[e];
    t.emplace_back(ed.v0, ed.v0, w);
    t.emplace_back(ed.v1, ed.v1, w);
    t.emplace_back(ed.v0, ed.v1, -w);
    t.emplace_back(ed.v1, ed.v0, -w);
  }
  Eigen::SparseMatrix<double> L(mesh.num_vertices(), mesh.num_vertices());
  L.setFromTriplets(t.begin(), t.end());
  return L;
}

}  // namespace willmore
