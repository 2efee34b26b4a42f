#include <algorithm>
#include <cmath>
#include <numbers>

#include "willmore/curvature.hpp"
#include "willmore/summation.hpp"

namespace willmore {

namespace {

double cross2(const Vec2& u, const Vec2& v) { return u[0] * v[1] - u[1] * v[0]; }

// Signed area of disk(0, r) intersected with triangle (0, p, q).
double wedge_area(const Vec2& p, const Vec2& q, double r) {
  Vec2 d = q - p;
  double a = d.squaredNorm();
  if (a == 0.0) return 0.0;
  double b = 2.0 * p.dot(d);
  double c = p.squaredNorm() - r * r;
  double disc = b * b - 4.0 * a * c;
  std::array<double, 4> ts{0.0, 1.0, 1.0, 1.0};
  int n = 1;
  if (disc > 0.0) {
    double s = std::sqrt(disc);
    double t1 = (-b - s) / (2.0 * a), t2 = (-b + s) / (2.0 * a);
    if (t1 > 0.0 && t1 < 1.0) ts[n++] = t1;
    if (t2 > 0.0 && t2 < 1.0) ts[n++] = t2;
  }
  ts[n++] = 1.0;
  double total = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    Vec2 u = p + ts[i] * d, v = p + ts[i + 1] * d;
    Vec2 mid = 0.5 * (u + v);
    if (mid.squaredNorm() <= r * r)
      total += 0.5 * cross2(u, v);
    else
      total += 0.5 * r * r * std::atan2(cross2(u, v), u.dot(v));
  }
  return total;
}

}  // namespace

double triangle_ball_area(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& center,
                          double r) {
  Vec4 e1 = (b - a).normalized();
  Vec4 e2 = (c - a) - (c - a).dot(e1) * e1;
  e2.normalize();
  Vec4 rel = center - a;
  Vec4 cp = a + rel.dot(e1) * e1 + rel.dot(e2) * e2;
  double d2 = (center - cp).squaredNorm();
  if (d2 >= r * r) return 0.0;
  double rho = std::sqrt(r * r - d2);
  auto proj = [&](const Vec4& x) { return Vec2((x - cp).dot(e1), (x - cp).dot(e2)); };
  Vec2 pa = proj(a), pb = proj(b), pc = proj(c);
  double s = wedge_area(pa, pb, rho) + wedge_area(pb, pc, rho) + wedge_area(pc, pa, rho);
  return std::abs(s);
}

DensityReport density_report(const TriMesh& mesh, const Vec4& center,
                             std::span<const double> radii) {
  if (radii.empty()) throw ValidationError("density report needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw ValidationError("radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1]))
      throw ValidationError("radii must be strictly decreasing");
  }
  DensityReport rep;
  rep.center = center;
  rep.radii.assign(radii.begin(), radii.end());
  const double rmax = radii[0];

  // Faces touching the largest ball; local edge length from those faces.
  std::vector<int> near;
  NeumaierSum edge_sum;
  int edge_count = 0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& fc = mesh.face(f);
    const Vec4 &a = mesh.position(fc[0]), &b = mesh.position(fc[1]), &c = mesh.position(fc[2]);
    double la = (b - a).norm(), lb = (c - b).norm(), lc = (a - c).norm();
    double reach = std::max({la, lb, lc});
    double dmin = std::min({(a - center).norm(), (b - center).norm(), (c - center).norm()});
    if (dmin <= rmax + reach) near.push_back(f);
    if (dmin <= radii.back() + reach) {
      edge_sum.add(la + lb + lc);
      edge_count += 3;
    }
  }
  for (double r : radii) {
    NeumaierSum area;
    for (int f : near) {
      const auto& fc = mesh.face(f);
      area.add(triangle_ball_area(mesh.position(fc[0]), mesh.position(fc[1]),
                                  mesh.position(fc[2]), center, r));
    }
    rep.ratios.push_back(area.value() / (std::numbers::pi * r * r));
  }

  // Ratios behave like theta + c r^2; extrapolate the two smallest radii.
  const std::size_t n = radii.size();
  if (n >= 2) {
    double s1 = radii[n - 2], s2 = radii[n - 1];
    double r1 = rep.ratios[n - 2], r2 = rep.ratios[n - 1];
    rep.limit_estimate = (s1 * s1 * r2 - s2 * s2 * r1) / (s1 * s1 - s2 * s2);
  } else {
    rep.limit_estimate = rep.ratios.back();
  }
  double local_h = edge_count > 0 ? edge_sum.value() / edge_count : mesh.mean_edge_length();
  rep.under_resolved = radii.back() < 3.0 * local_h;
  return rep;
}

}  // namespace willmore
