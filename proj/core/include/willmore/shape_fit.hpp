#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "willmore/mesh.hpp"

namespace willmore {

// Second fundamental form at a face barycenter from a local quadratic
// graph fit over the vertex one-rings of the face corners.
//
// tangent[0..1] is an orthonormal frame of the fitted tangent plane with the
// orientation of the face; normal[0..codim) completes it to a positively
// oriented frame of the ambient space. A[a] is the 2x2 matrix of the normal
// component along normal[a].
struct FaceShape {
  std::array<Vec4, 2> tangent;
  std::array<Vec4, 2> normal;
  std::array<Eigen::Matrix2d, 2> A;
  int codim = 1;
  double area = 0.0;

  Vec4 mean_curvature() const;
  double gauss() const;
  double a_sq() const;
  double ao_sq() const;
  // Normal curvature 2(A°11.n1 A°12.n2 - A°11.n2 A°12.n1); zero for codim 1.
  double normal_curvature() const;
};

struct FaceShapeFits {
  std::vector<FaceShape> faces;
};

FaceShapeFits fit_face_shapes(const TriMesh& mesh);

}  // namespace willmore
