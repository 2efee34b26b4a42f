#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "willmore/curvature.hpp"
#include "willmore/error.hpp"
#include "willmore/generators.hpp"
#include "willmore/intrinsic.hpp"

using namespace willmore;
using oracle::kPi;

TEST(Curvature, GaussBonnetOnGeneratedMeshes) {
  NeckedSpheresSpec n2;
  n2.genus = 2;
  for (const TriMesh& m : {icosphere(3), torus(3.0, 1.0, 24, 40), clifford_r4(20, 24),
                           clifford_stereo(24, 24), perturbed_clifford(24, 24, 0.08), necked_spheres(n2)}) {
    CurvatureBundle b = curvature_bundle(m);
    EXPECT_LE(b.gauss_bonnet_residual, 1e-10);
    EXPECT_EQ(b.euler_characteristic, m.euler_characteristic());
  }
}

TEST(Curvature, RigidMotionAndDilationInvariance) {
  std::mt19937_64 rng(3);
  for (const TriMesh& m : {clifford_stereo(32, 32), perturbed_clifford(24, 24, 0.05)}) {
    CurvatureBundle b = curvature_bundle(m);
    auto R = oracle::random_rotation(rng, m.ambient_dim());
    Vec4 t(0.3, -1.2, 0.7, m.ambient_dim() == 4 ? 0.4 : 0.0);
    CurvatureBundle br = curvature_bundle(oracle::rigid_motion(m, R, t));
    EXPECT_NEAR(br.willmore, b.willmore, 1e-12 * b.willmore);
    EXPECT_NEAR(br.tracefree_energy, b.tracefree_energy, 1e-12 * b.willmore);
    for (double lam : {0.01, 3.7, 250.0}) {
      CurvatureBundle bd = curvature_bundle(oracle::rigid_motion(m, Eigen::Matrix4d::Identity(), Vec4::Zero(), lam));
      EXPECT_NEAR(bd.willmore, b.willmore, 1e-10 * b.willmore);
      EXPECT_NEAR(bd.tracefree_energy, b.tracefree_energy, 1e-10 * b.willmore);
    }
  }
}

TEST(Curvature, EnergyFormIdentityHoldsInsideBundle) {
  NeckedSpheresSpec n2;
  n2.genus = 2;
  for (const TriMesh& m : {icosphere(3), torus(2.0, 1.0, 32, 32), necked_spheres(n2)}) {
    CurvatureBundle b = curvature_bundle(m);
    double p = b.genus;
    EXPECT_LE(std::abs(b.tracefree_energy - 2 * b.willmore - 8 * kPi * (p - 1)) / (1 + b.willmore), 1e-12);
    EXPECT_LE(energy_identity_residual(b), 1e-12);
  }
}

TEST(Curvature, GaussEquationSquaredNormIsDefinitional) {
  TriMesh m = torus(2.0, 1.0, 32, 32);
  CurvatureBundle b = curvature_bundle(m);
  double s = 0.0;
  for (int i = 0; i < m.num_vertices(); ++i) s += 0.25 * b.a_sq[i] * b.vertex_area[i];
  EXPECT_NEAR(b.willmore - s - 2 * kPi * (1 - b.genus), 0.0, 1e-12 * b.willmore);
}

TEST(Curvature, SphereEnergyAndConvergenceOrder) {
  double e[3];
  for (int k = 3; k <= 5; ++k) {
    CurvatureBundle b = curvature_bundle(icosphere(k));
    e[k - 3] = std::abs(b.willmore - 4 * kPi);
  }
  EXPECT_LE(e[2], 0.01 * 4 * kPi);
  EXPECT_GE(std::log2(e[0] / e[1]), 1.5);
  EXPECT_GE(std::log2(e[1] / e[2]), 1.5);
}

TEST(Curvature, CliffordStereographicConvergenceOrder) {
  double e[3];
  int k = 0;
  for (int n : {32, 64, 128}) e[k++] = std::abs(curvature_bundle(clifford_stereo(n, n)).willmore - 2 * kPi * kPi);
  EXPECT_LE(e[2], 0.01 * 2 * kPi * kPi);
  EXPECT_GE(std::log2(e[0] / e[1]), 1.5);
  EXPECT_GE(std::log2(e[1] / e[2]), 1.5);
}

TEST(Curvature, TorusOfRevolutionMatchesQuadrature) {
  for (double ratio : {1.2, std::sqrt(2.0), 2.0, 4.0}) {
    double w = curvature_bundle(torus(ratio, 1.0, 96, 96)).willmore;
    double sigma = 1.0 / ratio;
    double closed = kPi * kPi / (sigma * std::sqrt(1 - sigma * sigma));
    EXPECT_NEAR(oracle::torus_willmore(ratio, 1.0), closed, 1e-9 * closed);
    EXPECT_NEAR(w, closed, 0.02 * closed) << ratio;
  }
}

TEST(Curvature, IdentityCrossCheckWithFittedShape) {
  EXPECT_LE(willmore_identity_residual(icosphere(4), curvature_bundle(icosphere(4))), 0.03);
  TriMesh c = clifford_stereo(128, 128);
  EXPECT_LE(willmore_identity_residual(c, curvature_bundle(c)), 0.03);
}

TEST(Curvature, LocalTracefreeEnergy) {
  TriMesh m = clifford_stereo(32, 32);
  CurvatureBundle b = curvature_bundle(m);
  EXPECT_NEAR(local_tracefree_energy(m, b, Vec4::Zero(), 2 * m.diameter()), b.tracefree_measure_total(), 1e-9);
  auto atoms = b.tracefree_atoms();
  for (int v : {0, 77, 400}) EXPECT_DOUBLE_EQ(local_tracefree_energy(m, b, m.position(v), 1e-9), atoms[v]);
  TriMesh s = icosphere(4);
  CurvatureBundle bs = curvature_bundle(s);
  EXPECT_LE(local_tracefree_energy(s, bs, s.position(5), 0.5), 1e-3 * bs.willmore);
  EXPECT_THROW(local_tracefree_energy(m, b, Vec4::Zero(), 0.0), ValidationError);
}

TEST(Density, TriangleBallClipping) {
  Vec4 a(0, 0, 0, 0), b(1, 0, 0, 0), c(0, 1, 0, 0);
  EXPECT_NEAR(triangle_ball_area(a, b, c, Vec4::Zero(), 5.0), 0.5, 1e-14);
  EXPECT_EQ(triangle_ball_area(a, b, c, Vec4(5, 5, 5, 0), 1.0), 0.0);
  // Quarter disk at the right-angle corner.
  EXPECT_NEAR(triangle_ball_area(a, b, c, a, 0.3), kPi * 0.09 / 4, 1e-12);
  // Center off the plane: the section is a disk of radius sqrt(r^2 - d^2).
  EXPECT_NEAR(triangle_ball_area(a, b, c, Vec4(0, 0, 0.1, 0), 0.3), kPi * (0.09 - 0.01) / 4, 1e-12);
}

TEST(Density, SphereAndOffSurfaceCenters) {
  TriMesh s = icosphere(5);
  std::vector<double> radii{0.4, 0.2};
  DensityReport d = density_report(s, s.position(17), radii);
  EXPECT_NEAR(d.limit_estimate, 1.0, 0.01);
  EXPECT_FALSE(d.under_resolved);
  DensityReport far = density_report(s, Vec4(5, 0, 0, 0), radii);
  for (double r : far.ratios) EXPECT_EQ(r, 0.0);
  std::vector<double> bad{0.2, 0.4};
  EXPECT_THROW(density_report(s, Vec4::Zero(), bad), ValidationError);
  std::vector<double> tiny{0.01, 0.005};
  EXPECT_TRUE(density_report(s, s.position(0), tiny).under_resolved);
}

TEST(Density, LiYauBoundOnAnalyticMeshes) {
  for (const TriMesh& m : {icosphere(5), torus(2.0, 1.0, 96, 96), clifford_stereo(96, 96)}) {
    CurvatureBundle b = curvature_bundle(m);
    double h = m.mean_edge_length();
    std::vector<double> radii{8 * h, 4 * h};
    for (int k = 0; k < 10; ++k) {
      int v = k * m.num_vertices() / 10;
      EXPECT_LE(density_report(m, m.position(v), radii).limit_estimate, b.willmore / (4 * kPi) + 0.05);
    }
  }
}

TEST(Intrinsic, CotanLaplacianAnnihilatesConstants) {
  TriMesh m = torus(2.0, 1.0, 20, 20);
  auto g = intrinsic_geometry(m);
  auto L = cotan_laplacian(m, g);
  Eigen::VectorXd one = Eigen::VectorXd::Ones(m.num_vertices());
  EXPECT_LE((L * one).cwiseAbs().maxCoeff(), 1e-12);
  std::vector<double> l = edge_lengths(m);
  l[0] = 1e3;
  EXPECT_THROW(intrinsic_geometry(m, l), ValidationError);
}
