#pragma once

// Reference values computed independently of the library code paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Geometry>

#include "willmore/generators.hpp"
#include "willmore/mesh.hpp"
#include "willmore/shape_fit.hpp"

namespace oracle {

using willmore::Vec3;
using willmore::Vec4;
constexpr double kPi = std::numbers::pi;

// Willmore energy of the torus of revolution by trapezoid quadrature of
// (1/4) (k1 + k2)^2 dA; the integrand is periodic, so the rule converges
// spectrally.
inline double torus_willmore(double major, double minor, int n = 4096) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = 2.0 * kPi * i / n;
    double rho = major + minor * std::cos(v);
    double k1 = std::cos(v) / rho, k2 = 1.0 / minor;
    s += 0.25 * (k1 + k2) * (k1 + k2) * minor * rho;
  }
  return 2.0 * kPi * s * (2.0 * kPi / n);
}

// Conformal modulus b of the torus of revolution: the conformal coordinate
// w = u + i int r dv / (R + r cos v) gives the rectangle 2 pi x period.
inline double torus_modulus_b(double major, double minor, int n = 4096) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += minor / (major + minor * std::cos(2.0 * kPi * i / n));
  double period = s * 2.0 * kPi / n;
  double b = 2.0 * kPi / period;
  return b >= 1.0 ? b : 1.0 / b;
}

// omega by exhaustive enumeration of compositions of p with parts < p.
inline double omega(int n, int p, const std::map<int, double>& beta) {
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, double)> rec = [&](int left, double acc) {
    if (left == 0) {
      best = std::min(best, acc);
      return;
    }
    for (int part = 1; part <= left && part < p; ++part) rec(left - part, acc + beta.at(part) - 4 * kPi);
  };
  rec(p, 0.0);
  double bt = std::isfinite(best) ? 4 * kPi + best : best;
  double w = std::min(8 * kPi, bt);
  if (n == 4) w = std::min(w, beta.at(p) + 8 * kPi / 3);
  return w;
}

// Second fundamental form of the perturbed Clifford torus at (s, t) from
// central differences of the exact parametrization, in an orthonormal
// frame positively oriented with (x_s, x_t).
inline willmore::FaceShape perturbed_clifford_shape(double s, double t, double amp) {
  const double h = 1e-4;
  auto X = [&](double a, double b) { return willmore::perturbed_clifford_point(a, b, amp); };
  Vec4 x0 = X(s, t);
  Vec4 xs = (X(s + h, t) - X(s - h, t)) / (2 * h);
  Vec4 xt = (X(s, t + h) - X(s, t - h)) / (2 * h);
  Vec4 xss = (X(s + h, t) - 2 * x0 + X(s - h, t)) / (h * h);
  Vec4 xtt = (X(s, t + h) - 2 * x0 + X(s, t - h)) / (h * h);
  Vec4 xst = (X(s + h, t + h) - X(s + h, t - h) - X(s - h, t + h) + X(s - h, t - h)) / (4 * h * h);
  Vec4 e1 = xs.normalized();
  Vec4 e2 = (xt - xt.dot(e1) * e1).normalized();
  Vec4 n[2];
  int k = 0;
  for (int c = 0; c < 4 && k < 2; ++c) {
    Vec4 v = Vec4::Unit(c);
    v -= v.dot(e1) * e1 + v.dot(e2) * e2;
    for (int j = 0; j < k; ++j) v -= v.dot(n[j]) * n[j];
    if (v.norm() > 0.3) n[k++] = v.normalized();
  }
  Eigen::Matrix4d F;
  F << e1, e2, n[0], n[1];
  if (F.determinant() < 0) n[1] = -n[1];
  Eigen::Matrix2d P;
  P << xs.dot(e1), xt.dot(e1), xs.dot(e2), xt.dot(e2);
  Eigen::Matrix2d Q = P.inverse();
  willmore::FaceShape fs;
  fs.codim = 2;
  fs.tangent = {e1, e2};
  fs.normal = {n[0], n[1]};
  for (int a = 0; a < 2; ++a) {
    Eigen::Matrix2d M;
    M << xss.dot(n[a]), xst.dot(n[a]), xst.dot(n[a]), xtt.dot(n[a]);
    fs.A[a] = Q.transpose() * M * Q;
  }
  return fs;
}

// Parameter coordinates (s, t) of the barycenter of a periodic grid face
// with vertex (i, j) at index i * nt + j.
inline std::pair<double, double> grid_face_center(const willmore::TriMesh& m, int f, int ns, int nt) {
  const auto& fc = m.face(f);
  int i0 = fc[0] / nt, j0 = fc[0] % nt;
  double si = 0.0, sj = 0.0;
  for (int v : fc) {
    int di = v / nt - i0, dj = v % nt - j0;
    if (di > 1) di -= ns;
    if (di < -1) di += ns;
    if (dj > 1) dj -= nt;
    if (dj < -1) dj += nt;
    si += i0 + di;
    sj += j0 + dj;
  }
  return {2 * kPi * si / (3 * ns), 2 * kPi * sj / (3 * nt)};
}

inline Eigen::Matrix4d random_rotation(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> nd;
  Eigen::Matrix4d A = Eigen::Matrix4d::Identity();
  if (dim == 3) {
    Eigen::Matrix3d B;
    for (int i = 0; i < 9; ++i) B(i / 3, i % 3) = nd(rng);
    Eigen::HouseholderQR<Eigen::Matrix3d> qr(B);
    Eigen::Matrix3d Q = qr.householderQ();
    if (Q.determinant() < 0) Q.col(0) = -Q.col(0);
    A.topLeftCorner<3, 3>() = Q;
  } else {
    for (int i = 0; i < 16; ++i) A(i / 4, i % 4) = nd(rng);
    Eigen::HouseholderQR<Eigen::Matrix4d> qr(A);
    A = qr.householderQ();
    if (A.determinant() < 0) A.col(0) = -A.col(0);
  }
  return A;
}

inline willmore::TriMesh rigid_motion(const willmore::TriMesh& m, const Eigen::Matrix4d& R, const Vec4& t,
                                      double scale = 1.0) {
  std::vector<Vec4> p;
  for (const auto& x : m.positions()) p.push_back(scale * (R * x + t));
  return m.with_positions(std::move(p));
}

// Same surface with vertex labels permuted.
inline willmore::TriMesh relabel(const willmore::TriMesh& m, std::mt19937_64& rng) {
  std::vector<int> perm(m.num_vertices());
  for (int i = 0; i < m.num_vertices(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Vec4> pos(m.num_vertices());
  for (int i = 0; i < m.num_vertices(); ++i) pos[perm[i]] = m.position(i);
  std::vector<willmore::Face> faces;
  for (const auto& f : m.faces()) faces.push_back({perm[f[0]], perm[f[1]], perm[f[2]]});
  std::shuffle(faces.begin(), faces.end(), rng);
  return willmore::TriMesh::create(m.ambient_dim(), std::move(pos), std::move(faces));
}

// Largest sum of atoms at vertices strictly inside a ball of the given
// radius centered at any vertex or face barycenter; plain O(V (V + F)).
inline double brute_ball_scan(const willmore::TriMesh& m, const std::vector<double>& atoms, double r) {
  std::vector<Vec4> centers(m.positions().begin(), m.positions().end());
  for (const auto& f : m.faces()) centers.push_back((m.position(f[0]) + m.position(f[1]) + m.position(f[2])) / 3.0);
  double best = 0.0;
  for (const auto& c : centers) {
    double s = 0.0;
    for (int v = 0; v < m.num_vertices(); ++v)
      if ((m.position(v) - c).norm() < r) s += atoms[v];
    best = std::max(best, s);
  }
  return best;
}

// Exact distance from x to the triangle set, by projection onto every face.
inline double brute_distance(const willmore::TriMesh& m, const Vec4& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : m.faces()) {
    Vec4 a = m.position(f[0]), b = m.position(f[1]), c = m.position(f[2]);
    Eigen::Matrix<double, 4, 2> E;
    E << b - a, c - a;
    Eigen::Vector2d w = (E.transpose() * E).ldlt().solve(E.transpose() * (x - a));
    double d;
    if (w[0] >= 0 && w[1] >= 0 && w[0] + w[1] <= 1) {
      d = (a + E * w - x).norm();
    } else {
      auto seg = [&](const Vec4& p, const Vec4& q) {
        double t = std::clamp((x - p).dot(q - p) / (q - p).squaredNorm(), 0.0, 1.0);
        return (p + t * (q - p) - x).norm();
      };
      d = std::min({seg(a, b), seg(b, c), seg(c, a)});
    }
    best = std::min(best, d);
  }
  return best;
}

}  // namespace oracle
