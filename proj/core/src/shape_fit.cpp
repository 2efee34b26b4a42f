#include "willmore/shape_fit.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "willmore/parallel.hpp"

namespace willmore {

Vec4 FaceShape::mean_curvature() const {
  Vec4 h = Vec4::Zero();
  for (int a = 0; a < codim; ++a) h += A[a].trace() * normal[a];
  return h;
}

double FaceShape::gauss() const {
  double k = 0.0;
  for (int a = 0; a < codim; ++a) k += A[a].determinant();
  return k;
}

double FaceShape::a_sq() const {
  double s = 0.0;
  for (int a = 0; a < codim; ++a) s += A[a].squaredNorm();
  return s;
}

double FaceShape::ao_sq() const {
  double s = 0.0;
  for (int a = 0; a < codim; ++a) {
    double d = 0.5 * (A[a](0, 0) - A[a](1, 1));
    s += 2.0 * d * d + 2.0 * A[a](0, 1) * A[a](0, 1);
  }
  return s;
}

double FaceShape::normal_curvature() const {
  if (codim < 2) return 0.0;
  double o11_1 = 0.5 * (A[0](0, 0) - A[0](1, 1)), o12_1 = A[0](0, 1);
  double o11_2 = 0.5 * (A[1](0, 0) - A[1](1, 1)), o12_2 = A[1](0, 1);
  return 2.0 * (o11_1 * o12_2 - o11_2 * o12_1);
}

namespace {

// Completes an orthonormal pair to a positively oriented frame.
void complete_frame(int dim, const Vec4& t1, const Vec4& t2, std::array<Vec4, 2>& n) {
  if (dim == 3) {
    Vec3 c = t1.head<3>().cross(t2.head<3>());
    n[0] = Vec4(c[0], c[1], c[2], 0.0).normalized();
    n[1] = Vec4::Zero();
    return;
  }
  std::array<Vec4, 4> cand;
  std::array<double, 4> res;
  for (int i = 0; i < 4; ++i) {
    Vec4 e = Vec4::Unit(i);
    e -= e.dot(t1) * t1;
    e -= e.dot(t2) * t2;
    cand[i] = e;
    res[i] = e.squaredNorm();
  }
  int i0 = static_cast<int>(std::max_element(res.begin(), res.end()) - res.begin());
  Vec4 a = cand[i0].normalized();
  int i1 = -1;
  double best = -1.0;
  for (int i = 0; i < 4; ++i) {
    if (i == i0) continue;
    Vec4 e = cand[i] - cand[i].dot(a) * a;
    if (e.squaredNorm() > best) {
      best = e.squaredNorm();
      i1 = i;
    }
  }
  Vec4 b = cand[i1] - cand[i1].dot(a) * a;
  b.normalize();
  Eigen::Matrix4d m;
  m << t1, t2, a, b;
  if (m.determinant() < 0) b = -b;
  n[0] = a;
  n[1] = b;
}

}  // namespace

FaceShapeFits fit_face_shapes(const TriMesh& mesh) {
  const int dim = mesh.ambient_dim();
  const int codim = dim - 2;
  FaceShapeFits out;
  out.faces.resize(mesh.num_faces());

  parallel_for(mesh.num_faces(), [&](std::size_t fi) {
    const int f = static_cast<int>(fi);
    const auto& fc = mesh.face(f);
    std::vector<int> stencil;
    for (int v : fc) {
      stencil.push_back(v);
      for (int w : mesh.vertex_neighbors(v)) stencil.push_back(w);
    }
    std::sort(stencil.begin(), stencil.end());
    stencil.erase(std::unique(stencil.begin(), stencil.end()), stencil.end());
    if (stencil.size() < 6) throw ValidationError("mesh too coarse for shape fit");

    const Vec4 &p0 = mesh.position(fc[0]), &p1 = mesh.position(fc[1]), &p2 = mesh.position(fc[2]);
    Vec4 origin = (p0 + p1 + p2) / 3.0;
    Vec4 t1 = (p1 - p0).normalized();
    Vec4 t2 = (p2 - p0) - (p2 - p0).dot(t1) * t1;
    t2.normalize();
    double h = ((p1 - p0).norm() + (p2 - p1).norm() + (p0 - p2).norm()) / 3.0;

    FaceShape s;
    s.codim = codim;
    s.area = 0.5 * std::sqrt(std::max(0.0, (p1 - p0).squaredNorm() * (p2 - p0).squaredNorm() -
                                               std::pow((p1 - p0).dot(p2 - p0), 2)));
    const int m = static_cast<int>(stencil.size());
    Eigen::MatrixXd X(m, 6);
    Eigen::MatrixXd Z(m, codim);
    for (int pass = 0; pass < 2; ++pass) {
      complete_frame(dim, t1, t2, s.normal);
      for (int i = 0; i < m; ++i) {
        Vec4 d = mesh.position(stencil[i]) - origin;
        double x = d.dot(t1) / h, y = d.dot(t2) / h;
        X.row(i) << 1.0, x, y, 0.5 * x * x, x * y, 0.5 * y * y;
        for (int a = 0; a < codim; ++a) Z(i, a) = d.dot(s.normal[a]) / h;
      }
      Eigen::MatrixXd C = X.colPivHouseholderQr().solve(Z);
      for (int a = 0; a < codim; ++a) {
        s.A[a] << C(3, a), C(4, a), C(4, a), C(5, a);
        s.A[a] /= h;
      }
      if (pass == 0) {
        Vec4 n1 = t1, n2 = t2, shift = Vec4::Zero();
        for (int a = 0; a < codim; ++a) {
          n1 += C(1, a) * s.normal[a];
          n2 += C(2, a) * s.normal[a];
          shift += C(0, a) * h * s.normal[a];
        }
        origin += shift;
        t1 = n1.normalized();
        t2 = n2 - n2.dot(t1) * t1;
        t2.normalize();
      }
    }
    s.tangent = {t1, t2};
    if (codim == 1) s.A[1].setZero();
    out.faces[f] = s;
  });
  return out;
}

}  // namespace willmore
