#pragma once

#include <span>
#include <vector>

#include "willmore/intrinsic.hpp"
#include "willmore/mesh.hpp"
#include "willmore/shape_fit.hpp"

namespace willmore {

/// Pointwise discrete curvature quantities at the vertices.
///
/// mean_curvature is the mean curvature vector (trace of the second
/// fundamental form), so a unit sphere has |H| = 2. gauss_curvature is the
/// angle defect divided by the mixed Voronoi area.
struct CurvatureBundle {
  int ambient_dim = 3;
  int euler_characteristic = 2;
  int genus = 0;
  std::vector<Vec4> mean_curvature;
  std::vector<double> gauss_curvature;
  std::vector<double> angle_defect;
  std::vector<double> vertex_area;
  std::vector<double> a_sq;   // |A|^2 = |H|^2 - 2K
  std::vector<double> ao_sq;  // |A°|^2 = |H|^2/2 - 2K
  double willmore = 0.0;          // (1/4) sum |H|^2 A_i
  double tracefree_energy = 0.0;  // sum |A°|^2 A_i
  double total_area = 0.0;
  double gauss_bonnet_residual = 0.0;  // |sum defects - 2 pi chi|

  // Vertex atoms of the local tracefree measure, clamped at zero.
  std::vector<double> tracefree_atoms() const;
  double tracefree_measure_total() const;
};

CurvatureBundle curvature_bundle(const TriMesh& mesh);

// |W - (1/4) int |A|^2 - 2 pi (1 - p)| / W with int |A|^2 from per-face fits.
double willmore_identity_residual(const CurvatureBundle& bundle, const FaceShapeFits& fits);
double willmore_identity_residual(const TriMesh& mesh, const CurvatureBundle& bundle);

// Relative residual of E = 2W + 8 pi (p - 1) inside the bundle.
double energy_identity_residual(const CurvatureBundle& bundle);

// Sum of tracefree atoms at vertices strictly inside B_radius(center).
double local_tracefree_energy(const TriMesh& mesh, const CurvatureBundle& bundle,
                              const Vec4& center, double radius);

struct DensityReport {
  Vec4 center = Vec4::Zero();
  std::vector<double> radii;   // strictly decreasing
  std::vector<double> ratios;  // area(B_r) / (pi r^2)
  double limit_estimate = 0.0;
  bool under_resolved = false;
};

// Area ratios using exact triangle / ball clipping.
DensityReport density_report(const TriMesh& mesh, const Vec4& center,
                             std::span<const double> radii);

// Area of the part of triangle (a, b, c) inside the closed ball B_r(center).
double triangle_ball_area(const Vec4& a, const Vec4& b, const Vec4& c,
                          const Vec4& center, double r);

}  // namespace willmore
