// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "willmore/cli.hpp"
#include "willmore/curvature.hpp"
#include "willmore/gaussmap4.hpp"
#include "willmore/generators.hpp"
#include "willmore/intrinsic.hpp"
#include "willmore/moduli.hpp"
#include "willmore/moebius.hpp"
#include "willmore/uniformize.hpp"

using namespace willmore;
using oracle::kPi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Outcome::check(bool ok, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  if (!detail.empty()) detail += "; ";
  detail += buf;
  if (!ok) {
    detail += " [x]";
    pass = false;
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
auto timed(double& secs, F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  auto r = f();
  secs = seconds_since(t0);
  return r;
}

Outcome energies() {
  Outcome o;
  double t1, t2;
  double w1 = timed(t1, [] { return curvature_bundle(icosphere(5)).willmore; });
  double w2 = timed(t2, [] { return curvature_bundle(clifford_stereo(128, 128)).willmore; });
  o.check(std::abs(w1 / (4 * kPi) - 1) <= 0.01 && t1 < 10, "W(ico5)/4pi = %.5f in %.2fs", w1 / (4 * kPi), t1);
  o.check(std::abs(w2 / (2 * kPi * kPi) - 1) <= 0.01 && t2 < 10, "W(stereo 128)/2pi^2 = %.5f in %.2fs",
          w2 / (2 * kPi * kPi), t2);
  return o;
}

Outcome gauss_bonnet() {
  Outcome o;
  std::vector<std::pair<std::string, TriMesh>> ms;
  ms.emplace_back("ico5", icosphere(5));
  ms.emplace_back("torus128", torus(2.0, 1.0, 128, 128));
  ms.emplace_back("clifford_r4", clifford_r4(64, 64));
  ms.emplace_back("stereo128", clifford_stereo(128, 128));
  ms.emplace_back("perturbed", perturbed_clifford(64, 64, 0.05));
  for (int p = 1; p <= 3; ++p) {
    NeckedSpheresSpec s;
    s.genus = p;
    if (p == 3) s.neck_radius = 0.07;
    ms.emplace_back("necked_p" + std::to_string(p), necked_spheres(s));
  }
  double worst = 0.0;
  std::string which;
  for (const auto& [id, m] : ms) {
    double r = curvature_bundle(m).gauss_bonnet_residual;
    if (r >= worst) {
      worst = r;
      which = id;
    }
  }
  o.check(worst <= 1e-10, "max residual %.2e over %zu meshes (%s)", worst, ms.size(), which.c_str());
  return o;
}

Outcome identity() {
  Outcome o;
  TriMesh s = icosphere(5);
  double rs = willmore_identity_residual(s, curvature_bundle(s));
  TriMesh c = clifford_stereo(128, 128);
  double rc = willmore_identity_residual(c, curvature_bundle(c));
  o.check(rs <= 0.03, "sphere residual %.4f", rs);
  o.check(rc <= 0.03, "Clifford torus residual %.4f", rc);
  return o;
}

Vec4 far_center(const TriMesh& m, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  for (;;) {
    Vec4 d(nd(rng), nd(rng), nd(rng), 0.0);
    Vec4 c = d.normalized() * m.diameter() * (1.0 + std::abs(nd(rng)));
    if (oracle::brute_distance(m, c) >= 0.5 * m.diameter()) return c;
  }
}

Outcome mobius_invariance() {
  Outcome o;
  std::mt19937_64 rng(2024);
  TriMesh m = torus(2.0, 1.0, 96, 96);
  CurvatureBundle b = curvature_bundle(m);
  double dw = 0.0, de = 0.0;
  for (int k = 0; k < 4; ++k) {
    Vec4 c = far_center(m, rng);
    CurvatureBundle bi = curvature_bundle(apply(MobiusMap{{Invert{c}}}, m));
    dw = std::max(dw, std::abs(bi.willmore / b.willmore - 1));
    de = std::max(de, std::abs(bi.tracefree_energy / b.tracefree_energy - 1));
  }
  o.check(dw <= 0.02 && de <= 0.02, "max relative change W %.4f, E %.4f over 4 inversions", dw, de);

  const double ratios[] = {1.2, std::sqrt(2.0), 2.0, 4.0};
  std::vector<TriMesh> fam;
  for (double q : ratios) fam.push_back(torus(q, 1.0, 64, 64));
  auto argmin = [&](const std::function<TriMesh(const TriMesh&)>& f) {
    int best = 0;
    double bw = 1e300;
    for (int i = 0; i < 4; ++i) {
      double w = curvature_bundle(f(fam[i])).willmore;
      if (w < bw) {
        bw = w;
        best = i;
      }
    }
    return best;
  };
  int base = argmin([](const TriMesh& t) { return t; });
  bool same = true;
  for (int k = 0; k < 3; ++k) {
    // One center valid for every member of the family.
    Vec4 c = far_center(fam[3], rng);
    same = same && argmin([&](const TriMesh& t) { return apply(MobiusMap{{Invert{c}}}, t); }) == base;
  }
  o.check(same && base == 1, "argmin ratio %.4f unchanged by 3 inversions", ratios[base]);
  return o;
}

Outcome normalize_certificate() {
  Outcome o;
  NeckedSpheresSpec s;
  s.genus = 1;
  s.gap = 0.1;
  s.neck_radius = 0.02;
  std::vector<std::pair<std::string, TriMesh>> ms;
  ms.emplace_back("clifford_stereo", clifford_stereo(64, 64));
  ms.emplace_back("clifford_r4", clifford_r4(32, 32));
  ms.emplace_back("necked(1,0.1,0.02)", necked_spheres(s));
  for (const auto& [id, m] : ms) {
    double t;
    NormalizationResult r = timed(t, [&] { return normalize(m, curvature_bundle(m)); });
    const auto& c = r.certificate;
    double scan = oracle::brute_ball_scan(r.mesh, curvature_bundle(r.mesh).tracefree_atoms(), c.rho0);
    double bound = 0.5 * c.tracefree_energy * 1.05;
    o.check(c.enclosing_radius <= 1 + 1e-6 && c.max_ball_energy <= bound && scan <= bound && t < 60 &&
                r.mesh.genus() == m.genus(),
            "%s: radius %.6f, ball %.4f, scan %.4f, E/2 %.4f, %.1fs", id.c_str(), c.enclosing_radius,
            c.max_ball_energy, scan, 0.5 * c.tracefree_energy, t);
  }
  return o;
}

Outcome liouville() {
  Outcome o;
  double err[3];
  int k = 0;
  for (int n : {32, 64, 128}) {
    TriMesh m = clifford_r4(n, n);
    std::vector<double> v(m.num_vertices());
    for (int i = 0; i < m.num_vertices(); ++i)
      v[i] = 0.3 * std::cos(2 * kPi * (i / n) / n) * std::cos(2 * kPi * (i % n) / n);
    std::vector<double> l = edge_lengths(m);
    for (int e = 0; e < m.num_edges(); ++e) l[e] *= std::exp(0.5 * (v[m.edge(e).v0] + v[m.edge(e).v1]));
    UniformizationResult r = solve_liouville(m, l);
    IntrinsicGeometry g = intrinsic_geometry(m, l);
    double s = 0.0;
    for (int i = 0; i < m.num_vertices(); ++i) s += std::exp(-2 * v[i]) * g.vertex_area[i];
    double c = 0.5 * std::log(s / g.total_area);
    double e = 0.0;
    for (int i = 0; i < m.num_vertices(); ++i) e = std::max(e, std::abs(r.u[i] - v[i] - c));
    err[k++] = e;
  }
  double q1 = std::log2(err[0] / err[1]), q2 = std::log2(err[1] / err[2]);
  o.check(err[2] <= 1e-2, "manufactured Linf error %.2e at 128", err[2]);
  o.check(q1 >= 1.9 && q2 >= 1.9, "orders %.3f, %.3f", q1, q2);
  TriMesh f = clifford_r4(128, 128);
  double mu = solve_liouville(f, curvature_bundle(f)).max_abs_u;
  o.check(mu <= 1e-6, "flat Clifford max|u| %.1e", mu);
  return o;
}

Outcome moduli() {
  Outcome o;
  auto mod = [](double major) {
    TriMesh m = torus(major, 1.0, 128, 128);
    return torus_modulus(m, solve_liouville(m, curvature_bundle(m)));
  };
  TorusModulus a = mod(std::sqrt(2.0)), b = mod(2.0);
  o.check(std::abs(a.b - 1) <= 0.02 && std::abs(a.a) <= 0.01, "(sqrt2, 1): tau = %.2e + %.5f i", a.a, a.b);
  o.check(std::abs(b.b - std::sqrt(3.0)) <= 0.03, "(2, 1): b = %.5f vs %.5f", b.b, oracle::torus_modulus_b(2.0, 1.0));
  return o;
}

Outcome sharpness() {
  Outcome o;
  std::vector<std::pair<std::string, TriMesh>> fam;
  const double gaps[] = {0.2, 0.1, 0.05, 0.025};
  for (double g : gaps) {
    NeckedSpheresSpec s;
    s.gap = g;
    s.neck_radius = 0.2 * g;
    fam.emplace_back(std::to_string(g), necked_spheres(s));
  }
  SweepOptions opt;
  opt.beta_table = {{1, 2 * kPi * kPi}};
  SweepTable t = compactness_sweep(fam, opt);
  bool w_inc = true, u_inc = true, b_inc = true;
  std::string ws, us, bs;
  char buf[64];
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i > 0) {
      w_inc = w_inc && t.rows[i].willmore > t.rows[i - 1].willmore;
      u_inc = u_inc && t.rows[i].max_abs_u > t.rows[i - 1].max_abs_u;
      b_inc = b_inc && t.rows[i].b > t.rows[i - 1].b;
    }
    std::snprintf(buf, sizeof buf, "%s%.4f", i ? "," : "", t.rows[i].willmore / (8 * kPi));
    ws += buf;
    std::snprintf(buf, sizeof buf, "%s%.3f", i ? "," : "", t.rows[i].max_abs_u);
    us += buf;
    std::snprintf(buf, sizeof buf, "%s%.3f", i ? "," : "", t.rows[i].b);
    bs += buf;
  }
  double last = t.rows.back().willmore / (8 * kPi);
  o.check(w_inc && std::abs(last - 1) <= 0.02, "W/8pi = %s", ws.c_str());
  o.check(u_inc, "max|u| = %s", us.c_str());
  o.check(b_inc, "b = %s", bs.c_str());
  return o;
}

Vec4 random_surface_point(const TriMesh& m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> face(0, m.num_faces() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto& f = m.face(face(rng));
  double a = u(rng), b = u(rng);
  if (a + b > 1) {
    a = 1 - a;
    b = 1 - b;
  }
  return m.position(f[0]) + a * (m.position(f[1]) - m.position(f[0])) + b * (m.position(f[2]) - m.position(f[0]));
}

Outcome li_yau() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::vector<std::pair<std::string, TriMesh>> ms;
  ms.emplace_back("ico5", icosphere(5));
  ms.emplace_back("torus128", torus(2.0, 1.0, 128, 128));
  ms.emplace_back("stereo128", clifford_stereo(128, 128));
  for (const auto& [id, m] : ms) {
    double bound = curvature_bundle(m).willmore / (4 * kPi);
    double h = m.mean_edge_length();
    std::vector<double> radii{8 * h, 4 * h};
    double worst = -1e300;
    for (int k = 0; k < 20; ++k)
      worst = std::max(worst, density_report(m, random_surface_point(m, rng), radii).limit_estimate - bound);
    o.check(worst <= 0.05, "%s: max(limit - W/4pi) = %.4f", id.c_str(), worst);
  }
  NeckedSpheresSpec s;
  s.gap = 0.025;
  s.neck_radius = 0.005;
  TriMesh m = necked_spheres(s);
  std::vector<double> radii{0.4, 0.25};
  DensityReport d = density_report(m, Vec4(1 + 0.5 * s.gap, 0, 0, 0), radii);
  o.check(d.limit_estimate >= 1.8 && !d.under_resolved, "double sheet limit %.4f", d.limit_estimate);
  return o;
}

Outcome gauss_map() {
  Outcome o;
  TriMesh c = clifford_r4(64, 64);
  GaussSplit gc = grassmann_split(c);
  double excess = -1e300;
  for (int f = 0; f < c.num_faces(); ++f)
    excess = std::max(excess, std::abs(gc.normal_curvature[f]) - 0.5 * gc.ao_sq_face[f]);
  o.check(excess <= 1e-6, "clifford_r4 max(|R| - |A°|^2/2) = %.2e", excess);

  const int n = 128;
  const double amp = 0.05;
  TriMesh p = perturbed_clifford(n, n, amp);
  GaussSplit gp = grassmann_split(p);
  PullbackAreaCheck pc = pullback_area_check(p, gp);
  double num[2] = {0, 0}, den[2] = {0, 0};
  for (int f = 0; f < p.num_faces(); ++f) {
    auto [s, t] = oracle::grid_face_center(p, f, n, n);
    FaceShape sh = oracle::perturbed_clifford_shape(s, t, amp);
    double a = gp.face_area[f], K = sh.gauss(), R = sh.normal_curvature();
    num[0] += std::abs(pc.spherical_plus[f] - (K + R) * a);
    den[0] += std::abs((K + R) * a);
    num[1] += std::abs(pc.spherical_minus[f] - (K - R) * a);
    den[1] += std::abs((K - R) * a);
  }
  o.check(num[0] / den[0] <= 0.05 && num[1] / den[1] <= 0.05, "pullback residual +%.4f -%.4f at 128",
          num[0] / den[0], num[1] / den[1]);

  std::vector<std::pair<std::string, TriMesh>> ms;
  ms.emplace_back("sphere", embed_in_r4(icosphere(5)));
  ms.emplace_back("clifford_r4", std::move(c));
  ms.emplace_back("perturbed", std::move(p));
  for (auto& [id, m] : ms) {
    GaussSplit g = id == "perturbed" ? std::move(gp) : grassmann_split(m);
    DegreeReport d = degree(g, curvature_bundle(m));
    o.check(!d.inconclusive, "%s degrees %.4f, %.4f", id.c_str(), d.raw_plus, d.raw_minus);
  }

  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Vec3 a(nd(rng), nd(rng), nd(rng)), b(nd(rng), nd(rng), nd(rng));
    worst = std::max(worst, xi_exactness_check(a.normalized(), b.normalized(), 1e-4));
  }
  o.check(worst <= 1e-6, "xi exactness max error %.2e over 100 pairs", worst);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const std::vector<std::vector<std::string>> cmds = {
      {"analyze", "--gen", "sphere", "--subdiv", "4"},
      {"normalize", "--gen", "clifford-stereo", "--res", "48"},
      {"uniformize", "--gen", "clifford-stereo", "--res", "64"},
      {"modulus", "--gen", "torus", "--major", "2", "--res", "64"},
      {"sweep", "--family", "tori", "--res", "32"},
      {"gausscheck", "--gen", "perturbed-clifford", "--res", "48"}};
  fs::path root = fs::temp_directory_path() / "willmore_acceptance_determinism";
  fs::remove_all(root);
  int files = 0, diffs = 0, failures = 0;
  for (std::size_t k = 0; k < cmds.size(); ++k) {
    fs::path d[2] = {root / (std::to_string(k) + "a"), root / (std::to_string(k) + "b")};
    const char* threads[2] = {"1", "4"};
    for (int r = 0; r < 2; ++r) {
      auto args = cmds[k];
      args.insert(args.end(), {"--threads", threads[r], "--out", d[r].string()});
      std::ostringstream out, err;
      if (cli::run(args, out, err) != 0) ++failures;
    }
    for (const auto& e : fs::directory_iterator(d[0])) {
      ++files;
      if (slurp(e.path()) != slurp(d[1] / e.path().filename())) ++diffs;
    }
  }
  o.check(failures == 0 && diffs == 0 && files >= static_cast<int>(cmds.size()),
          "%d report files from %zu commands, %d differ, %d failed runs", files, cmds.size(), diffs, failures);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion all[] = {{"energies", energies},
                           {"gauss-bonnet", gauss_bonnet},
                           {"willmore identity", identity},
                           {"moebius invariance", mobius_invariance},
                           {"normalization certificate", normalize_certificate},
                           {"liouville solver", liouville},
                           {"torus moduli", moduli},
                           {"sharpness trend", sharpness},
                           {"li-yau density", li_yau},
                           {"gauss map identities", gauss_map},
                           {"determinism", determinism}};
  int failed = 0, id = 0;
  for (const auto& c : all) {
    ++id;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %2d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", id, c.name, seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %d criteria passed\n", id - failed, id);
  return failed == 0 ? 0 : 1;
}
