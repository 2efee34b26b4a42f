#include "willmore/uniformize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "willmore/summation.hpp"

namespace willmore {

namespace {

constexpr double kPi = std::numbers::pi;

double inf_norm(const Eigen::VectorXd& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

void finish(UniformizationResult& r, const IntrinsicGeometry& g) {
  const int nv = static_cast<int>(r.u.size());
  NeumaierSum s;
  for (int i = 0; i < nv; ++i) s.add(std::exp(-2.0 * r.u[i]) * g.vertex_area[i]);
  double shift = 0.5 * std::log(s.value() / g.total_area);
  for (double& x : r.u) x += shift;
  NeumaierSum a0;
  for (int i = 0; i < nv; ++i) a0.add(std::exp(-2.0 * r.u[i]) * g.vertex_area[i]);
  r.area_g = g.total_area;
  r.area_g0 = a0.value();
  auto [mn, mx] = std::minmax_element(r.u.begin(), r.u.end());
  r.osc_u = *mx - *mn;
  r.max_abs_u = std::max(std::abs(*mn), std::abs(*mx));
}

UniformizationResult solve_flat(const TriMesh& mesh, const IntrinsicGeometry& g,
                                const LiouvilleOptions& opt) {
  const int nv = mesh.num_vertices();
  Eigen::SparseMatrix<double> L = cotan_laplacian(mesh, g);
  Eigen::VectorXd b(nv);
  for (int i = 0; i < nv; ++i) b[i] = g.angle_defect[i];
  // Defects sum to zero up to rounding; remove the remainder so the
  // singular system is consistent.
  double mean = b.sum() / nv;
  Eigen::VectorXd bc = b.array() - mean;

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(opt.cg_tolerance);
  cg.setMaxIterations(std::max(1000, 20 * nv));
  cg.compute(L);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(nv);
  UniformizationResult r;
  r.genus = 1;
  double res = inf_norm(bc);
  for (int pass = 0; pass < 6 && res > opt.residual_tolerance; ++pass) {
    Eigen::VectorXd rhs = bc - L * u;
    rhs.array() -= rhs.mean();
    Eigen::VectorXd du = cg.solve(rhs);
    r.iterations += static_cast<int>(cg.iterations());
    u += du;
    u.array() -= u.mean();
    res = inf_norm(b - L * u);
  }
  r.residual_inf = res;
  if (!(res <= opt.residual_tolerance))
    throw SolverError("Liouville solve did not reach residual tolerance: " + std::to_string(res));
  r.u.assign(u.data(), u.data() + nv);
  r.curvature_g0 = 0.0;
  finish(r, g);
  return r;
}

UniformizationResult solve_hyperbolic(const TriMesh& mesh, const IntrinsicGeometry& g,
                                      const LiouvilleOptions& opt) {
  const int nv = mesh.num_vertices();
  const double k0 = 2.0 * kPi * mesh.euler_characteristic() / g.total_area;
  Eigen::SparseMatrix<double> L = cotan_laplacian(mesh, g);
  Eigen::Map<const Eigen::VectorXd> a(g.vertex_area.data(), nv);
  Eigen::Map<const Eigen::VectorXd> defect(g.angle_defect.data(), nv);

  auto residual = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    return L * u + (k0 * (-2.0 * u).array().exp() * a.array()).matrix() - defect;
  };

  Eigen::VectorXd u = Eigen::VectorXd::Zero(nv);
  Eigen::VectorXd F = residual(u);
  double fn = inf_norm(F);
  UniformizationResult r;
  r.genus = mesh.genus();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  int it = 0;
  while (fn > opt.residual_tolerance) {
    if (++it > opt.max_newton_iterations) throw SolverError("Newton iteration stagnated");
    Eigen::SparseMatrix<double> J = L;
    for (int i = 0; i < nv; ++i) J.coeffRef(i, i) += -2.0 * k0 * std::exp(-2.0 * u[i]) * a[i];
    if (it == 1)
      ldlt.analyzePattern(J);
    ldlt.factorize(J);
    if (ldlt.info() != Eigen::Success) throw SolverError("Newton Jacobian factorization failed");
    Eigen::VectorXd du = ldlt.solve(-F);
    double step = 1.0;
    for (int ls = 0;; ++ls) {
      if (ls > 40) throw SolverError("Newton line search failed");
      Eigen::VectorXd trial = u + step * du;
      Eigen::VectorXd Ft = residual(trial);
      double ft = inf_norm(Ft);
      if (ft < fn || ft <= opt.residual_tolerance) {
        u = trial;
        F = Ft;
        fn = ft;
        break;
      }
      step *= 0.5;
    }
  }
  r.iterations = it;
  r.u.assign(u.data(), u.data() + nv);
  finish(r, g);
  r.curvature_g0 = 2.0 * kPi * mesh.euler_characteristic() / r.area_g0;
  // Residual of the normalized solution with the recomputed curvature.
  Eigen::Map<const Eigen::VectorXd> un(r.u.data(), nv);
  r.residual_inf = inf_norm(L * un +
                            (r.curvature_g0 * (-2.0 * un).array().exp() * a.array()).matrix() -
                            defect);
  return r;
}

UniformizationResult solve(const TriMesh& mesh, const IntrinsicGeometry& g,
                           const LiouvilleOptions& opt) {
  const int p = mesh.genus();
  if (p == 0) throw ValidationError("spherical uniformization not supported");
  return p == 1 ? solve_flat(mesh, g, opt) : solve_hyperbolic(mesh, g, opt);
}

}  // namespace

UniformizationResult solve_liouville(const TriMesh& mesh, const CurvatureBundle& bundle,
                                     const LiouvilleOptions& options) {
  (void)bundle;  // the bundle's areas and defects equal the intrinsic ones
  return solve(mesh, intrinsic_geometry(mesh), options);
}

UniformizationResult solve_liouville(const TriMesh& mesh, std::span<const double> lengths,
                                     const LiouvilleOptions& options) {
  return solve(mesh, intrinsic_geometry(mesh, lengths), options);
}

std::pair<double, double> bilipschitz_report(const UniformizationResult& result) {
  return {result.osc_u, result.max_abs_u};
}

EnergyThresholds omega_constant(int n, int p, const std::map<int, double>& beta_table) {
  if (n != 3 && n != 4) throw ValidationError("codimension: n must be 3 or 4");
  if (p < 1) throw ValidationError("genus must be at least 1");
  auto beta = [&](int g) {
    auto it = beta_table.find(g);
    if (it == beta_table.end())
      throw ValidationError("beta table is missing genus " + std::to_string(g));
    if (!(it->second > 0.0)) throw ValidationError("beta values must be positive");
    return it->second;
  };
  EnergyThresholds t;
  t.n = n;
  t.p = p;
  t.beta = beta_table;
  const double inf = std::numeric_limits<double>::infinity();
  // best[m]: cheapest sum of (beta_{p_i} - 4 pi) over compositions of m
  // with parts in [1, p - 1].
  std::vector<double> best(p + 1, inf);
  best[0] = 0.0;
  for (int m = 1; m <= p; ++m)
    for (int part = 1; part <= std::min(m, p - 1); ++part)
      if (best[m - part] < inf) best[m] = std::min(best[m], best[m - part] + beta(part) - 4.0 * kPi);
  t.beta_tilde = best[p] < inf ? 4.0 * kPi + best[p] : inf;
  t.omega = std::min(8.0 * kPi, t.beta_tilde);
  if (n == 4) t.omega = std::min(t.omega, beta(p) + 8.0 * kPi / 3.0);
  return t;
}

bool class_membership(double willmore, const EnergyThresholds& thresholds, double delta) {
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  return willmore <= thresholds.omega - delta;
}

}  // namespace willmore
