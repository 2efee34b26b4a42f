#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "willmore/curvature.hpp"
#include "willmore/mesh.hpp"

namespace willmore {

struct LiouvilleOptions {
  double cg_tolerance = 1e-12;       // relative, genus 1
  double residual_tolerance = 1e-10; // max-norm of the discrete equation
  int max_newton_iterations = 100;   // genus >= 2
};

/// Conformal factor u with g = e^{2u} g0, g0 of constant curvature.
///
/// Genus 1: L u = angle defects, with L the cotan Laplacian of g.
/// Genus >= 2: L u + K0 e^{-2u} a - defects = 0 with K0 = 2 pi chi / area(g).
/// u is shifted so that area(g0) = area(g).
struct UniformizationResult {
  int genus = 1;
  std::vector<double> u;
  double curvature_g0 = 0.0;
  double residual_inf = 0.0;
  double osc_u = 0.0;
  double max_abs_u = 0.0;
  double area_g = 0.0;
  double area_g0 = 0.0;
  int iterations = 0;
};

UniformizationResult solve_liouville(const TriMesh& mesh, const CurvatureBundle& bundle,
                                     const LiouvilleOptions& options = {});

// Same, for the metric defined by per-edge lengths on the mesh connectivity.
UniformizationResult solve_liouville(const TriMesh& mesh, std::span<const double> lengths,
                                     const LiouvilleOptions& options = {});

// (osc u, max |u|)
std::pair<double, double> bilipschitz_report(const UniformizationResult& result);

struct EnergyThresholds {
  int n = 3;
  int p = 1;
  std::map<int, double> beta;
  double beta_tilde = 0.0;  // +inf for p = 1
  double omega = 0.0;
};

// omega_{n,p}: min(8 pi, beta~_p) for n = 3 and
// min(8 pi, beta~_p, beta_p + 8 pi / 3) for n = 4, where beta~_p is the
// cheapest split of genus p into at least two handles.
EnergyThresholds omega_constant(int n, int p, const std::map<int, double>& beta_table);

// W <= omega - delta.
bool class_membership(double willmore, const EnergyThresholds& thresholds, double delta);

}  // namespace willmore
