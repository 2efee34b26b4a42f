#pragma once

#include <utility>
#include <vector>

#include "willmore/curvature.hpp"
#include "willmore/mesh.hpp"
#include "willmore/shape_fit.hpp"

namespace willmore {

// sqrt2 * Pi_+-(v ^ w) in the bases e12, e13, e14 of the self-dual and
// anti-self-dual 2-vectors:
//   plus  = (x12 + x34, x13 - x24, x14 + x23)
//   minus = (x12 - x34, x13 + x24, x14 - x23)
// Unit vectors for orthonormal v, w.
std::pair<Vec3, Vec3> bivector_split(const Vec4& v, const Vec4& w);

/// Gauss map of an R^4 surface split into S^2_+ x S^2_-.
///
/// S^2_+ is oriented by its outer normal, S^2_- by its inner normal, so
/// the signed area forms pulled back by phi_+- are (K +- R) dA.
struct GaussSplit {
  std::vector<Vec3> phi_plus;   // per face, from the triangle frame
  std::vector<Vec3> phi_minus;
  std::vector<double> normal_curvature;  // R, per face, from fitted A°
  std::vector<double> gauss_face;        // K, per face, from fitted A
  std::vector<double> ao_sq_face;
  std::vector<double> face_area;
  std::vector<Vec3> vertex_phi_plus;     // area-weighted vertex averages
  std::vector<Vec3> vertex_phi_minus;
  FaceShapeFits fits;
};

GaussSplit grassmann_split(const TriMesh& mesh4);

struct PullbackAreaCheck {
  std::vector<double> spherical_plus;   // signed area of the phi_+ image of each face
  std::vector<double> spherical_minus;
  std::vector<double> predicted_plus;   // (K + R) * area
  std::vector<double> predicted_minus;  // (K - R) * area
  double relative_l1_plus = 0.0;        // sum |sph - pred| / sum |pred|
  double relative_l1_minus = 0.0;
};

PullbackAreaCheck pullback_area_check(const TriMesh& mesh4, const GaussSplit& split);

// Signed area of the spherical triangle (a, b, c); positive when
// a . (b x c) > 0.
double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

struct DegreeReport {
  int plus = 0;
  int minus = 0;
  double raw_plus = 0.0;  // sum (K + R) area / 4 pi
  double raw_minus = 0.0;
  double rounding_error_plus = 0.0;
  double rounding_error_minus = 0.0;
  bool inconclusive = false;  // a rounding error above 0.2
};

// K from angle defects of the bundle, R from the split.
DegreeReport degree(const GaussSplit& split, const CurvatureBundle& bundle);

struct JacobianPair {
  double formula = 0.0;  // (1/2) sqrt(K^2 + |H|^2 |B|^2 / 2)
  double split = 0.0;    // J_phi / 4 with the analytic differential of (phi_+, phi_-)
  double split_fd = 0.0; // J_phi / 4 from vertex values of phi_+- on the face
};

struct HoffmanOssermanReport {
  std::vector<int> faces;  // evaluated faces
  std::vector<JacobianPair> values;
  int skipped = 0;         // faces with |H| <= threshold
};

HoffmanOssermanReport hoffman_osserman_jacobian(const TriMesh& mesh4, const GaussSplit& split,
                                                double h_threshold = 1e-8);

// xi_p(q) = -(p x q) / (1 - p.q), tangent to S^2 at q.
struct OneFormSample {
  Vec3 p = Vec3::Zero();
  Vec3 q = Vec3::Zero();
  Vec3 value = Vec3::Zero();
};

OneFormSample xi_form(const Vec3& p, const Vec3& q);

// |d xi / vol - 1| at q, fourth-order central differences of step h in a
// gnomonic chart.
double xi_exactness_check(const Vec3& p, const Vec3& q, double h);

}  // namespace willmore
