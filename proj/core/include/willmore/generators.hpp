#pragma once

#include <string>
#include <variant>

#include "willmore/mesh.hpp"

namespace willmore {

struct SphereSpec {
  int subdivisions = 4;
  double radius = 1.0;
};

// ((R + r cos v) cos u, (R + r cos v) sin u, r sin v)
struct TorusSpec {
  double major = 2.0;
  double minor = 1.0;
  int nu = 64;
  int nv = 64;
};

// (cos s, sin s, cos t, sin t) / sqrt 2 in R^4.
struct CliffordR4Spec {
  int ns = 64;
  int nt = 64;
};

// Stereographic image (x1, x2, x3) / (1 - x4) of the Clifford torus.
struct CliffordStereoSpec {
  int ns = 64;
  int nt = 64;
};

// Clifford torus pushed along its normal bundle by a small smooth bump.
struct PerturbedCliffordSpec {
  int ns = 64;
  int nt = 64;
  double amplitude = 0.05;
};

// Concentric spheres of radii 1 and 1 + gap joined by p + 1 catenoidal
// necks of waist radius neck_radius; genus p.
struct NeckedSpheresSpec {
  int genus = 1;
  double gap = 0.2;
  double neck_radius = 0.04;
  int azimuth = 96;            // samples around a neck (genus 1)
  int sphere_subdivisions = 4; // icosphere level of each sheet (genus >= 2)
  double blend = 2.5;          // width factor of the neck / sphere blend
};

using SurfaceSpec = std::variant<SphereSpec, TorusSpec, CliffordR4Spec, CliffordStereoSpec,
                                 PerturbedCliffordSpec, NeckedSpheresSpec>;

TriMesh generate(const SurfaceSpec& spec);

TriMesh icosphere(int subdivisions, double radius = 1.0);
TriMesh torus(double major, double minor, int nu, int nv);
TriMesh clifford_r4(int ns, int nt);
TriMesh clifford_stereo(int ns, int nt);
TriMesh perturbed_clifford(int ns, int nt, double amplitude);
TriMesh necked_spheres(const NeckedSpheresSpec& spec);

// Exact parametrization behind perturbed_clifford, for oracles.
Vec4 perturbed_clifford_point(double s, double t, double amplitude);

// Flips faces of an R^3 mesh whose signed volume is negative.
TriMesh orient_outward(const TriMesh& mesh);

std::string spec_name(const SurfaceSpec& spec);

}  // namespace willmore
