#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "willmore/error.hpp"

namespace willmore {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Face = std::array<int, 3>;

// Undirected edge, v0 < v1. Edge values elsewhere are oriented v0 -> v1.
struct Edge {
  int v0;
  int v1;
};

/// Closed, connected, oriented, manifold triangle mesh in R^3 or R^4.
///
/// Positions are stored with four coordinates; for ambient dimension 3 the
/// last coordinate is zero. Construction validates everything and throws
/// ValidationError, so a TriMesh value is always well formed.
class TriMesh {
 public:
  static TriMesh create(int ambient_dim, std::vector<Vec4> positions,
                        std::vector<Face> faces);

  int ambient_dim() const { return ambient_dim_; }
  int num_vertices() const { return static_cast<int>(positions_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  std::span<const Vec4> positions() const { return positions_; }
  const Vec4& position(int v) const { return positions_[v]; }
  std::span<const Face> faces() const { return faces_; }
  const Face& face(int f) const { return faces_[f]; }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }

  // face_edges(f)[k] is the edge opposite corner k of face f.
  const std::array<int, 3>& face_edges(int f) const { return face_edges_[f]; }
  const std::array<int, 2>& edge_faces(int e) const { return edge_faces_[e]; }

  // Sorted neighbor list and incident faces of a vertex.
  std::span<const int> vertex_neighbors(int v) const;
  std::span<const int> vertex_faces(int v) const;

  // Edge id joining a and b, or -1.
  int find_edge(int a, int b) const;

  int euler_characteristic() const {
    return num_vertices() - num_edges() + num_faces();
  }
  int genus() const { return (2 - euler_characteristic()) / 2; }

  // Diagonal of the axis-aligned bounding box.
  double diameter() const { return diameter_; }
  double mean_edge_length() const;

  // Same connectivity, new positions. Revalidates geometry only.
  TriMesh with_positions(std::vector<Vec4> positions) const;

 private:
  TriMesh() = default;
  void build_connectivity();
  void validate_geometry();

  int ambient_dim_ = 3;
  std::vector<Vec4> positions_;
  std::vector<Face> faces_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> face_edges_;
  std::vector<std::array<int, 2>> edge_faces_;
  std::vector<int> nbr_offset_, nbr_;
  std::vector<int> vf_offset_, vf_;
  double diameter_ = 0.0;
};

int genus(const TriMesh& mesh);

// Copy of an R^3 mesh viewed inside R^4 (fourth coordinate zero).
TriMesh embed_in_r4(const TriMesh& mesh);

// Signed enclosed volume of an R^3 mesh.
double signed_volume(const TriMesh& mesh);

}  // namespace willmore
