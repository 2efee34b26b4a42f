#include "willmore/gaussmap4.hpp"

#include <cmath>
#include <numbers>

#include "willmore/error.hpp"
#include "willmore/parallel.hpp"
#include "willmore/summation.hpp"

namespace willmore {

namespace {

constexpr double kPi = std::numbers::pi;

// Differential of (phi_+, phi_-) along the fitted tangent frame, in the
// orthonormal bases (e13+, e14+) and (e13-, e14-). Column k is e_k.
Eigen::Matrix<double, 4, 2> split_differential(const FaceShape& s) {
  const Eigen::Matrix2d& al = s.A[0];
  const Eigen::Matrix2d& be = s.A[1];
  Eigen::Matrix<double, 4, 2> D;
  for (int k = 0; k < 2; ++k) {
    D(0, k) = al(1, k) + be(0, k);
    D(1, k) = -al(0, k) + be(1, k);
    D(2, k) = al(1, k) - be(0, k);
    D(3, k) = al(0, k) + be(1, k);
  }
  return D;
}

double gram_jacobian(const Eigen::MatrixXd& D) {
  Eigen::Matrix2d G = D.transpose() * D;
  return std::sqrt(std::max(0.0, G.determinant()));
}

}  // namespace

std::pair<Vec3, Vec3> bivector_split(const Vec4& v, const Vec4& w) {
  auto x = [&](int i, int j) { return v[i] * w[j] - v[j] * w[i]; };
  double x12 = x(0, 1), x13 = x(0, 2), x14 = x(0, 3);
  double x23 = x(1, 2), x24 = x(1, 3), x34 = x(2, 3);
  return {Vec3(x12 + x34, x13 - x24, x14 + x23), Vec3(x12 - x34, x13 + x24, x14 - x23)};
}

GaussSplit grassmann_split(const TriMesh& mesh) {
  if (mesh.ambient_dim() != 4) throw ValidationError("Gauss map split requires ambient dimension 4");
  const int nf = mesh.num_faces(), nv = mesh.num_vertices();
  GaussSplit g;
  g.phi_plus.resize(nf);
  g.phi_minus.resize(nf);
  g.normal_curvature.resize(nf);
  g.gauss_face.resize(nf);
  g.ao_sq_face.resize(nf);
  g.face_area.resize(nf);
  for (int f = 0; f < nf; ++f) {
    const auto& fc = mesh.face(f);
    const Vec4& p0 = mesh.position(fc[0]);
    Vec4 e1 = mesh.position(fc[1]) - p0;
    Vec4 e2 = mesh.position(fc[2]) - p0;
    double n1 = e1.norm();
    if (!(n1 > 0.0)) throw ValidationError("degenerate tangent frame");
    Vec4 v = e1 / n1;
    Vec4 w = e2 - e2.dot(v) * v;
    double nw = w.norm();
    if (!(nw > 1e-12 * e2.norm())) throw ValidationError("degenerate tangent frame");
    w /= nw;
    auto [pp, pm] = bivector_split(v, w);
    g.phi_plus[f] = pp.normalized();
    g.phi_minus[f] = pm.normalized();
  }
  g.fits = fit_face_shapes(mesh);
  for (int f = 0; f < nf; ++f) {
    const FaceShape& s = g.fits.faces[f];
    g.normal_curvature[f] = s.normal_curvature();
    g.gauss_face[f] = s.gauss();
    g.ao_sq_face[f] = s.ao_sq();
    g.face_area[f] = s.area;
  }
  g.vertex_phi_plus.assign(nv, Vec3::Zero());
  g.vertex_phi_minus.assign(nv, Vec3::Zero());
  for (int f = 0; f < nf; ++f)
    for (int v : mesh.face(f)) {
      g.vertex_phi_plus[v] += g.face_area[f] * g.phi_plus[f];
      g.vertex_phi_minus[v] += g.face_area[f] * g.phi_minus[f];
    }
  for (int v = 0; v < nv; ++v) {
    if (!(g.vertex_phi_plus[v].norm() > 0.0) || !(g.vertex_phi_minus[v].norm() > 0.0))
      throw ValidationError("degenerate tangent frame");
    g.vertex_phi_plus[v].normalize();
    g.vertex_phi_minus[v].normalize();
  }
  return g;
}

double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  // Van Oosterom-Strackee; stays accurate for nearly degenerate triangles.
  return 2.0 * std::atan2(a.dot(b.cross(c)), 1.0 + a.dot(b) + b.dot(c) + c.dot(a));
}

PullbackAreaCheck pullback_area_check(const TriMesh& mesh, const GaussSplit& split) {
  const int nf = mesh.num_faces();
  if (static_cast<int>(split.phi_plus.size()) != nf)
    throw ValidationError("Gauss split does not match the mesh");
  PullbackAreaCheck c;
  c.spherical_plus.resize(nf);
  c.spherical_minus.resize(nf);
  c.predicted_plus.resize(nf);
  c.predicted_minus.resize(nf);
  NeumaierSum dp, dm, np, nm;
  for (int f = 0; f < nf; ++f) {
    const auto& fc = mesh.face(f);
    const auto& P = split.vertex_phi_plus;
    const auto& M = split.vertex_phi_minus;
    c.spherical_plus[f] = spherical_triangle_area(P[fc[0]], P[fc[1]], P[fc[2]]);
    c.spherical_minus[f] = -spherical_triangle_area(M[fc[0]], M[fc[1]], M[fc[2]]);
    double k = split.gauss_face[f], r = split.normal_curvature[f], a = split.face_area[f];
    c.predicted_plus[f] = (k + r) * a;
    c.predicted_minus[f] = (k - r) * a;
    dp.add(std::abs(c.spherical_plus[f] - c.predicted_plus[f]));
    dm.add(std::abs(c.spherical_minus[f] - c.predicted_minus[f]));
    np.add(std::abs(c.predicted_plus[f]));
    nm.add(std::abs(c.predicted_minus[f]));
  }
  c.relative_l1_plus = np.value() > 0.0 ? dp.value() / np.value() : dp.value();
  c.relative_l1_minus = nm.value() > 0.0 ? dm.value() / nm.value() : dm.value();
  return c;
}

DegreeReport degree(const GaussSplit& split, const CurvatureBundle& bundle) {
  NeumaierSum k, r;
  for (double d : bundle.angle_defect) k.add(d);
  for (std::size_t f = 0; f < split.normal_curvature.size(); ++f)
    r.add(split.normal_curvature[f] * split.face_area[f]);
  DegreeReport d;
  d.raw_plus = (k.value() + r.value()) / (4.0 * kPi);
  d.raw_minus = (k.value() - r.value()) / (4.0 * kPi);
  d.plus = static_cast<int>(std::lround(d.raw_plus));
  d.minus = static_cast<int>(std::lround(d.raw_minus));
  d.rounding_error_plus = std::abs(d.raw_plus - d.plus);
  d.rounding_error_minus = std::abs(d.raw_minus - d.minus);
  d.inconclusive = d.rounding_error_plus > 0.2 || d.rounding_error_minus > 0.2;
  return d;
}

HoffmanOssermanReport hoffman_osserman_jacobian(const TriMesh& mesh, const GaussSplit& split,
                                                double h_threshold) {
  const int nf = mesh.num_faces();
  if (static_cast<int>(split.fits.faces.size()) != nf)
    throw ValidationError("Gauss split does not match the mesh");
  HoffmanOssermanReport rep;
  for (int f = 0; f < nf; ++f) {
    const FaceShape& s = split.fits.faces[f];
    // Mean curvature vector in normal coordinates.
    Eigen::Vector2d h(s.A[0].trace(), s.A[1].trace());
    double hn = h.norm();
    if (!(hn > h_threshold)) {
      ++rep.skipped;
      continue;
    }
    Eigen::Vector2d u = h / hn;
    double b_sq = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Eigen::Vector2d a(s.A[0](i, j), s.A[1](i, j));
        Eigen::Vector2d b = a - a.dot(u) * u;
        b_sq += b.squaredNorm();
      }
    double k = s.gauss();
    JacobianPair jp;
    jp.formula = 0.5 * std::sqrt(k * k + 0.5 * hn * hn * b_sq);
    jp.split = 0.25 * gram_jacobian(split_differential(s));

    // Linear interpolation of the vertex values over the face.
    const auto& fc = mesh.face(f);
    const Vec4& x0 = mesh.position(fc[0]);
    Eigen::Matrix2d E;
    Eigen::Matrix<double, 6, 2> Phi;
    for (int c = 0; c < 2; ++c) {
      Vec4 dx = mesh.position(fc[c + 1]) - x0;
      E(0, c) = dx.dot(s.tangent[0]);
      E(1, c) = dx.dot(s.tangent[1]);
      Phi.block<3, 1>(0, c) = split.vertex_phi_plus[fc[c + 1]] - split.vertex_phi_plus[fc[0]];
      Phi.block<3, 1>(3, c) = split.vertex_phi_minus[fc[c + 1]] - split.vertex_phi_minus[fc[0]];
    }
    Eigen::Matrix<double, 6, 2> D = Phi * E.inverse();
    jp.split_fd = 0.25 * gram_jacobian(D);
    rep.faces.push_back(f);
    rep.values.push_back(jp);
  }
  return rep;
}

OneFormSample xi_form(const Vec3& p, const Vec3& q) {
  if (std::abs(p.norm() - 1.0) > 1e-9 || std::abs(q.norm() - 1.0) > 1e-9)
    throw ValidationError("xi form points must be unit vectors");
  if ((p - q).norm() < 1e-6) throw ValidationError("pole: q too close to p");
  OneFormSample s;
  s.p = p;
  s.q = q;
  s.value = -p.cross(q) / (1.0 - p.dot(q));
  return s;
}

double xi_exactness_check(const Vec3& p, const Vec3& q, double h) {
  if (!(h > 0.0)) throw ValidationError("step must be positive");
  Vec3 qn = q.normalized();
  Vec3 seed = std::abs(qn.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 t1 = (seed - seed.dot(qn) * qn).normalized();
  Vec3 t2 = qn.cross(t1);  // t1 x t2 = q
  auto chart = [&](double a, double b) -> Vec3 { return (qn + a * t1 + b * t2).normalized(); };
  auto d_chart = [&](double a, double b, int dir) -> Vec3 {
    Vec3 y = qn + a * t1 + b * t2;
    double s = y.norm();
    double c = dir == 0 ? a : b;
    return (dir == 0 ? t1 : t2) / s - y * (c / (s * s * s));
  };
  // Components of the pullback of xi in the chart.
  auto comp = [&](double a, double b, int dir) {
    return xi_form(p, chart(a, b)).value.dot(d_chart(a, b, dir));
  };
  // Fourth-order central differences.
  auto d_a = [&](int dir) {
    return (8.0 * (comp(h, 0.0, dir) - comp(-h, 0.0, dir)) - (comp(2 * h, 0.0, dir) - comp(-2 * h, 0.0, dir))) /
           (12.0 * h);
  };
  auto d_b = [&](int dir) {
    return (8.0 * (comp(0.0, h, dir) - comp(0.0, -h, dir)) - (comp(0.0, 2 * h, dir) - comp(0.0, -2 * h, dir))) /
           (12.0 * h);
  };
  double d_a_xib = d_a(1);
  double d_b_xia = d_b(0);
  double curl = d_a_xib - d_b_xia;
  double vol = qn.dot(d_chart(0.0, 0.0, 0).cross(d_chart(0.0, 0.0, 1)));
  return std::abs(curl / vol - 1.0);
}

}  // namespace willmore
