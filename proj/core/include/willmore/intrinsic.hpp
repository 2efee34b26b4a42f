#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "willmore/mesh.hpp"

namespace willmore {

// Discrete metric data computed from edge lengths only, so it is the same
// for R^3 and R^4 meshes and for conformally rescaled metrics.
struct IntrinsicGeometry {
  std::vector<double> edge_length;            // per edge
  std::vector<std::array<double, 3>> angle;   // per face corner
  std::vector<std::array<double, 3>> cot;     // per face corner
  std::vector<double> face_area;
  std::vector<double> vertex_area;            // mixed Voronoi
  std::vector<double> angle_defect;           // 2 pi - sum of corner angles
  std::vector<double> edge_weight;            // (cot a + cot b) / 2
  double total_area = 0.0;
};

std::vector<double> edge_lengths(const TriMesh& mesh);

IntrinsicGeometry intrinsic_geometry(const TriMesh& mesh, std::span<const double> lengths);
IntrinsicGeometry intrinsic_geometry(const TriMesh& mesh);

// Positive semidefinite cotan Laplacian: L_ii = sum_j w_ij, L_ij = -w_ij.
Eigen::SparseMatrix<double> cotan_laplacian(const TriMesh& mesh, const IntrinsicGeometry& geo);

// Corner angle opposite side a in a triangle with side lengths a, b, c.
double corner_angle(double a, double b, double c);
double triangle_area(double a, double b, double c);

}  // namespace willmore
