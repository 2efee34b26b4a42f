#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "willmore/mesh.hpp"
#include "willmore/uniformize.hpp"

namespace willmore {

struct SignedEdge {
  int edge;
  int sign;  // +1 along v0 -> v1
};

// Generators of the first homology of a torus from a tree-cotree split,
// with dual integer cocycles (values per edge, oriented v0 -> v1) such that
// cocycle j integrates to delta_jk over cycle k.
struct HomologyBasis {
  std::array<std::vector<SignedEdge>, 2> cycles;
  std::array<std::vector<double>, 2> cocycles;
  int cup_product = 0;  // +-1 certifies a basis
};

HomologyBasis homology_basis(const TriMesh& mesh);

// Reduced modulus tau = a + i b, 0 <= a <= 1/2, |tau| >= 1, of the flat
// metric e^{-2u} g.
struct TorusModulus {
  double a = 0.0;
  double b = 1.0;
  double raw_re = 0.0;  // before reduction
  double raw_im = 1.0;
  std::array<std::array<double, 2>, 2> dirichlet{};  // harmonic form Gram matrix
  double systole = 1.0;
};

TorusModulus torus_modulus(const TriMesh& mesh, const UniformizationResult& uniformization);

// 1 / sqrt(b): shortest closed geodesic of the unit-area flat torus.
double systole_estimate(const TorusModulus& modulus);

// Gauss reduction into the standard fundamental domain.
std::pair<double, double> reduce_modulus(double re, double im);

struct SweepRow {
  std::string mesh_id;
  double willmore = 0.0;
  double tracefree_energy = 0.0;
  bool member = false;
  double a = 0.0;
  double b = 1.0;
  double systole = 1.0;
  double max_abs_u = 0.0;
};

struct SweepOptions {
  int n = 3;
  double delta = 0.1;
  std::map<int, double> beta_table;
  // Rows with b above this must not be members.
  std::optional<double> degeneration_b;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<std::string> degenerate_members;  // violations of the trend
};

SweepTable compactness_sweep(const std::vector<std::pair<std::string, TriMesh>>& family,
                             const SweepOptions& options);

std::string sweep_csv(const SweepTable& table);

}  // namespace willmore
