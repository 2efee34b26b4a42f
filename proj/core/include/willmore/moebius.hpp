#pragma once

#include <span>
#include <variant>
#include <vector>

#include "willmore/curvature.hpp"
#include "willmore/mesh.hpp"

namespace willmore {

struct Translate {
  Vec4 offset = Vec4::Zero();
};
struct Dilate {
  double factor = 1.0;
};
// x -> (x - c) / |x - c|^2 + c
struct Invert {
  Vec4 center = Vec4::Zero();
};
using MobiusStep = std::variant<Translate, Dilate, Invert>;

// Composition of steps, applied left to right.
struct MobiusMap {
  std::vector<MobiusStep> steps;
  Vec4 apply(const Vec4& x) const;
};

// Throws ValidationError when an inversion center is closer than
// 1e-9 * diameter to a vertex.
TriMesh apply(const MobiusMap& map, const TriMesh& mesh);

struct BallMaximum {
  double energy = 0.0;
  Vec4 center = Vec4::Zero();
};

// Largest sum of atoms inside an open ball of the given radius, over the
// centers of a lattice with the given pitch (aligned at the origin).
BallMaximum lattice_ball_maximum(const TriMesh& mesh, std::span<const double> atoms,
                                 double radius, double pitch);

struct DilationCalibration {
  double lambda = 1.0;         // dilation factor
  Vec4 x0 = Vec4::Zero();      // heavy ball center, dilated coordinates
  double x0_energy = 0.0;      // content of the unit ball at x0 after dilation
  double measure_total = 0.0;  // total tracefree measure E
  int evaluations = 0;
  bool umbilic = false;
};

// Smallest lambda (relative tolerance 1e-3) such that, after dilation by
// lambda, every unit ball carries at most E/2 of the tracefree measure.
DilationCalibration calibrate_dilation(const TriMesh& mesh, const CurvatureBundle& bundle);

// A point at distance > 1 from the surface, searched on a pitch 1/2
// lattice in Chebyshev shells around x0. Nearest candidate in the first
// successful shell; ties broken lexicographically.
Vec4 find_empty_ball(const TriMesh& mesh, const Vec4& x0);

// Euclidean distance from a point to the surface.
double distance_to_surface(const TriMesh& mesh, const Vec4& x);

struct NormalizationCertificate {
  MobiusMap map;
  double lambda = 1.0;
  Vec4 x0 = Vec4::Zero();
  Vec4 empty_center = Vec4::Zero();
  double enclosing_radius = 0.0;
  double rho0 = 0.0;
  double max_ball_energy = 0.0;
  double tracefree_energy = 0.0;        // E of the normalized mesh
  double input_tracefree_energy = 0.0;  // E of the input
  bool umbilic = false;
  bool satisfied = false;  // enclosing radius and ball bound both hold
};

struct NormalizationResult {
  TriMesh mesh;
  NormalizationCertificate certificate;
};

struct NormalizeOptions {
  // Below this fraction of W the surface counts as totally umbilic and the
  // dilation is not calibrated.
  double umbilic_fraction = 1e-2;
  double ball_tolerance = 0.05;
};

NormalizationResult normalize(const TriMesh& mesh, const CurvatureBundle& bundle,
                              const NormalizeOptions& options = {});

}  // namespace willmore
