#include "willmore/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "willmore/summation.hpp"

namespace willmore {

std::vector<double> CurvatureBundle::tracefree_atoms() const {
  std::vector<double> m(ao_sq.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::max(ao_sq[i], 0.0) * vertex_area[i];
  return m;
}

double CurvatureBundle::tracefree_measure_total() const {
  auto m = tracefree_atoms();
  return compensated_sum(m);
}

CurvatureBundle curvature_bundle(const TriMesh& mesh) {
  const int nv = mesh.num_vertices();
  IntrinsicGeometry g = intrinsic_geometry(mesh);

  CurvatureBundle b;
  b.ambient_dim = mesh.ambient_dim();
  b.euler_characteristic = mesh.euler_characteristic();
  b.genus = mesh.genus();
  b.vertex_area = g.vertex_area;
  b.angle_defect = g.angle_defect;
  b.total_area = g.total_area;

  // Cotan Laplacian of the position, gathered per vertex in neighbor order.
  b.mean_curvature.assign(nv, Vec4::Zero());
  for (int v = 0; v < nv; ++v) {
    if (!(b.vertex_area[v] > 0.0)) throw ValidationError("vertex with zero area");
    Vec4 acc = Vec4::Zero();
    for (int w : mesh.vertex_neighbors(v)) {
      int e = mesh.find_edge(v, w);
      acc += g.edge_weight[e] * (mesh.position(w) - mesh.position(v));
    }
    b.mean_curvature[v] = acc / b.vertex_area[v];
  }

  b.gauss_curvature.resize(nv);
  b.a_sq.resize(nv);
  b.ao_sq.resize(nv);
  NeumaierSum w, e, defects;
  for (int v = 0; v < nv; ++v) {
    double k = b.angle_defect[v] / b.vertex_area[v];
    double h2 = b.mean_curvature[v].squaredNorm();
    b.gauss_curvature[v] = k;
    b.a_sq[v] = h2 - 2.0 * k;
    b.ao_sq[v] = 0.5 * h2 - 2.0 * k;
    w.add(0.25 * h2 * b.vertex_area[v]);
    e.add(0.5 * h2 * b.vertex_area[v]);
    e.add(-2.0 * b.angle_defect[v]);
    defects.add(b.angle_defect[v]);
  }
  b.willmore = w.value();
  b.tracefree_energy = e.value();
  b.gauss_bonnet_residual =
      std::abs(defects.value() - 2.0 * std::numbers::pi * b.euler_characteristic);
  return b;
}

double willmore_identity_residual(const CurvatureBundle& bundle, const FaceShapeFits& fits) {
  NeumaierSum a;
  for (const auto& f : fits.faces) a.add(0.25 * f.a_sq() * f.area);
  double p = bundle.genus;
  double rhs = a.value() + 2.0 * std::numbers::pi * (1.0 - p);
  return std::abs(bundle.willmore - rhs) / bundle.willmore;
}

double willmore_identity_residual(const TriMesh& mesh, const CurvatureBundle& bundle) {
  return willmore_identity_residual(bundle, fit_face_shapes(mesh));
}

double energy_identity_residual(const CurvatureBundle& bundle) {
  double p = bundle.genus;
  double rhs = 2.0 * bundle.willmore + 8.0 * std::numbers::pi * (p - 1.0);
  double scale = std::max(std::abs(bundle.tracefree_energy), bundle.willmore);
  return std::abs(bundle.tracefree_energy - rhs) / scale;
}

double local_tracefree_energy(const TriMesh& mesh, const CurvatureBundle& bundle,
                              const Vec4& center, double radius) {
  if (!(radius > 0.0)) throw ValidationError("radius must be positive");
  NeumaierSum s;
  const double r2 = radius * radius;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if ((mesh.position(v) - center).squaredNorm() < r2)
      s.add(std::max(bundle.ao_sq[v], 0.0) * bundle.vertex_area[v]);
  return s.value();
}

}  // namespace willmore
