#include "willmore/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <queue>
#include <unordered_map>

namespace willmore {

namespace {

constexpr double kPi = std::numbers::pi;

void require_resolution(int n, const char* what) {
  if (n < 8) throw ValidationError(std::string(what) + " resolution must be at least 8");
}

// Periodic grid faces, vertex (i, j) at i * nj + j.
std::vector<Face> grid_faces(int ni, int nj) {
  std::vector<Face> f;
  f.reserve(2 * ni * nj);
  for (int i = 0; i < ni; ++i)
    for (int j = 0; j < nj; ++j) {
      int a = i * nj + j, b = ((i + 1) % ni) * nj + j;
      int c = ((i + 1) % ni) * nj + (j + 1) % nj, d = i * nj + (j + 1) % nj;
      f.push_back({a, b, c});
      f.push_back({a, c, d});
    }
  return f;
}

std::uint64_t dkey(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Flips faces so that neighbors agree; face 0 keeps its orientation.
void orient_consistently(std::vector<Face>& faces) {
  std::unordered_map<std::uint64_t, std::vector<int>> by_edge;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f)
    for (int k = 0; k < 3; ++k) {
      int a = faces[f][k], b = faces[f][(k + 1) % 3];
      by_edge[dkey(std::min(a, b), std::max(a, b))].push_back(f);
    }
  std::vector<char> done(faces.size(), 0);
  for (std::size_t seed = 0; seed < faces.size(); ++seed) {
    if (done[seed]) continue;
    std::queue<int> q;
    q.push(static_cast<int>(seed));
    done[seed] = 1;
    while (!q.empty()) {
      int f = q.front();
      q.pop();
      for (int k = 0; k < 3; ++k) {
        int a = faces[f][k], b = faces[f][(k + 1) % 3];
        for (int g : by_edge[dkey(std::min(a, b), std::max(a, b))]) {
          if (g == f || done[g]) continue;
          bool same = false;
          for (int m = 0; m < 3; ++m)
            if (faces[g][m] == a && faces[g][(m + 1) % 3] == b) same = true;
          if (same) std::swap(faces[g][1], faces[g][2]);
          done[g] = 1;
          q.push(g);
        }
      }
    }
  }
}

TriMesh finish_r3(std::vector<Vec4> p, std::vector<Face> f) {
  return orient_outward(TriMesh::create(3, std::move(p), std::move(f)));
}

double smoothstep5(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

// Meridian of a catenoidal neck between spheres of radii ri < ro, centered
// at height zm on the axis. tau parametrizes the catenoid rho = c cosh tau;
// tau > 0 blends into the outer sphere, tau < 0 into the inner one.
struct NeckProfile {
  double ri, ro, zm, c, ao, ai, rho_a, rho_b, tau_b, psi_bo, psi_bi;

  NeckProfile(double gap, double neck, double beta) {
    ri = 1.0;
    ro = 1.0 + gap;
    zm = 1.0 + 0.5 * gap;
    c = neck;
    ao = std::sqrt(ro * ro - c * c) - zm;
    ai = zm - std::sqrt(ri * ri - c * c);
    double a = std::max(ao, ai);
    double rho_j = c * std::cosh(a / c);
    rho_a = std::max(rho_j / beta, c);
    rho_b = rho_j * beta;
    if (!(rho_b < 0.85 * ri))
      throw ValidationError("neck radius too large for the gap: blend region leaves the sphere");
    tau_b = std::acosh(rho_b / c);
    psi_bo = std::asin(rho_b / ro);
    psi_bi = std::asin(rho_b / ri);
    for (int i = 1; i <= 200; ++i) {
      double t = tau_b * i / 200.0;
      if (!(point(t)[1] > point(-t)[1]))
        throw ValidationError("neck profile self-intersects");
    }
  }

  // (rho, z) on the neck.
  Vec2 point(double tau) const {
    double rho = c * std::cosh(tau);
    double s = smoothstep5((rho - rho_a) / (rho_b - rho_a));
    double z = tau >= 0 ? std::sqrt(ro * ro - rho * rho) + (c * tau - ao) * (1.0 - s)
                        : std::sqrt(ri * ri - rho * rho) + (c * tau + ai) * (1.0 - s);
    return {rho, z};
  }
};

// A planar curve given piecewise, resampled uniformly in int ds / rho.
class ConformalResampler {
 public:
  template <class F>
  void add_piece(F&& f) {
    constexpr int n = 20000;
    for (int i = (pts_.empty() ? 0 : 1); i <= n; ++i) {
      double s = static_cast<double>(i) / n;
      Vec2 p = f(s);
      if (!pts_.empty()) {
        Vec2 q = pts_.back();
        double rho = 0.5 * (p[0] + q[0]);
        cum_.push_back(cum_.back() + (p - q).norm() / rho);
      } else {
        cum_.push_back(0.0);
      }
      pts_.push_back(p);
      param_.push_back({static_cast<int>(pieces_.size()), s});
    }
    pieces_.push_back(std::function<Vec2(double)>(f));
  }

  double length() const { return cum_.back(); }

  // Exact point at conformal fraction u in [0, 1].
  Vec2 at(double u) const {
    double t = u * length();
    auto it = std::upper_bound(cum_.begin(), cum_.end(), t);
    std::size_t i = std::clamp<std::size_t>(it - cum_.begin(), 1, cum_.size() - 1);
    double w = (t - cum_[i - 1]) / (cum_[i] - cum_[i - 1]);
    auto [k0, s0] = param_[i - 1];
    auto [k1, s1] = param_[i];
    if (k0 != k1) {  // piece boundary: interpolate within the later piece
      s0 = 0.0;
      k0 = k1;
    }
    return pieces_[k0](s0 + w * (s1 - s0));
  }

 private:
  std::vector<Vec2> pts_;
  std::vector<double> cum_;
  std::vector<std::pair<int, double>> param_;
  std::vector<std::function<Vec2(double)>> pieces_;
};

TriMesh necked_genus_one(const NeckedSpheresSpec& sp) {
  NeckProfile np(sp.gap, sp.neck_radius, sp.blend);
  ConformalResampler cr;
  cr.add_piece([&](double s) { return np.point(-np.tau_b + 2.0 * np.tau_b * s); });
  cr.add_piece([&](double s) {
    double psi = np.psi_bo + (kPi - 2.0 * np.psi_bo) * s;
    return Vec2(np.ro * std::sin(psi), np.ro * std::cos(psi));
  });
  cr.add_piece([&](double s) {
    Vec2 p = np.point(np.tau_b - 2.0 * np.tau_b * s);
    return Vec2(p[0], -p[1]);
  });
  cr.add_piece([&](double s) {
    double psi = kPi - np.psi_bi - (kPi - 2.0 * np.psi_bi) * s;
    return Vec2(np.ri * std::sin(psi), np.ri * std::cos(psi));
  });
  const int na = sp.azimuth;
  const int nm = std::max(8, static_cast<int>(std::lround(cr.length() * na / (2.0 * kPi))));
  std::vector<Vec4> pos;
  pos.reserve(na * nm);
  for (int i = 0; i < na; ++i) {
    double th = 2.0 * kPi * i / na;
    for (int j = 0; j < nm; ++j) {
      Vec2 q = cr.at(static_cast<double>(j) / nm);
      pos.emplace_back(q[0] * std::cos(th), q[0] * std::sin(th), q[1], 0.0);
    }
  }
  return finish_r3(std::move(pos), grid_faces(na, nm));
}

TriMesh necked_higher_genus(const NeckedSpheresSpec& sp) {
  NeckProfile np(sp.gap, sp.neck_radius, sp.blend);
  const int necks = sp.genus + 1;
  TriMesh unit = icosphere(sp.sphere_subdivisions, 1.0);
  const int nv = unit.num_vertices();

  // Cut angle around each neck axis, one icosphere edge beyond the blend.
  double h = unit.mean_edge_length();
  double psi_cut = np.psi_bi + 1.5 * h;
  if (!(psi_cut < 0.8 * kPi / necks))
    throw ValidationError("neck caps overlap: reduce neck radius or gap, or raise genus spacing");

  std::vector<Vec4> axes, e1s, e2s;
  for (int k = 0; k < necks; ++k) {
    double a = 2.0 * kPi * k / necks;
    axes.emplace_back(std::cos(a), std::sin(a), 0.0, 0.0);
    e1s.emplace_back(0.0, 0.0, 1.0, 0.0);
    e2s.emplace_back(-std::sin(a), std::cos(a), 0.0, 0.0);
  }
  auto angle_to = [&](const Vec4& d, int k) {
    return std::acos(std::clamp(d.dot(axes[k]), -1.0, 1.0));
  };
  std::vector<char> keep_v(nv, 1);
  for (int v = 0; v < nv; ++v)
    for (int k = 0; k < necks; ++k)
      if (angle_to(unit.position(v), k) < psi_cut) keep_v[v] = 0;
  std::vector<Face> kept;
  for (const auto& f : unit.faces())
    if (keep_v[f[0]] && keep_v[f[1]] && keep_v[f[2]]) kept.push_back(f);

  // Boundary loops: directed edges without a twin.
  std::map<std::pair<int, int>, int> directed;
  for (const auto& f : kept)
    for (int k = 0; k < 3; ++k) directed[{f[k], f[(k + 1) % 3]}] = 1;
  std::map<int, int> next;
  for (const auto& [e, one] : directed) {
    (void)one;
    if (!directed.count({e.second, e.first})) {
      if (next.count(e.first)) throw ValidationError("pinched cap boundary; change resolution");
      next[e.first] = e.second;
    }
  }

  std::vector<Vec4> pos;
  pos.reserve(2 * nv);
  for (int v = 0; v < nv; ++v) pos.push_back(np.ro * unit.position(v));
  for (int v = 0; v < nv; ++v) pos.push_back(np.ri * unit.position(v));
  std::vector<Face> faces;
  for (const auto& f : kept) faces.push_back(f);
  for (const auto& f : kept) faces.push_back({f[0] + nv, f[2] + nv, f[1] + nv});

  std::vector<char> used(nv, 0);
  int loops = 0;
  for (const auto& [start, unused] : next) {
    (void)unused;
    if (used[start]) continue;
    std::vector<int> loop;
    int v = start;
    do {
      used[v] = 1;
      loop.push_back(v);
      v = next.at(v);
    } while (v != start && loop.size() <= next.size());
    if (v != start) throw ValidationError("open cap boundary");
    ++loops;

    Vec4 c = Vec4::Zero();
    for (int w : loop) c += unit.position(w);
    int k = 0;
    double best = -2.0;
    for (int a = 0; a < necks; ++a)
      if (c.dot(axes[a]) > best) {
        best = c.dot(axes[a]);
        k = a;
      }

    const int m = static_cast<int>(loop.size());
    std::vector<ConformalResampler> cols(m);
    std::vector<double> theta(m);
    double mean_len = 0.0;
    for (int i = 0; i < m; ++i) {
      const Vec4& d = unit.position(loop[i]);
      double psi = angle_to(d, k);
      theta[i] = std::atan2(d.dot(e2s[k]), d.dot(e1s[k]));
      cols[i].add_piece([&np, psi](double s) {
        double a = psi + (np.psi_bo - psi) * s;
        return Vec2(np.ro * std::sin(a), np.ro * std::cos(a));
      });
      cols[i].add_piece([&np](double s) { return np.point(np.tau_b - 2.0 * np.tau_b * s); });
      cols[i].add_piece([&np, psi](double s) {
        double a = np.psi_bi + (psi - np.psi_bi) * s;
        return Vec2(np.ri * std::sin(a), np.ri * std::cos(a));
      });
      mean_len += cols[i].length() / m;
    }
    const int nj = std::max(4, static_cast<int>(std::lround(mean_len * m / (2.0 * kPi))));
    std::vector<std::vector<int>> idx(m, std::vector<int>(nj + 1));
    for (int i = 0; i < m; ++i) {
      idx[i][0] = loop[i];
      idx[i][nj] = loop[i] + nv;
      for (int j = 1; j < nj; ++j) {
        Vec2 q = cols[i].at(static_cast<double>(j) / nj);
        Vec4 radial = std::cos(theta[i]) * e1s[k] + std::sin(theta[i]) * e2s[k];
        idx[i][j] = static_cast<int>(pos.size());
        pos.push_back(q[1] * axes[k] + q[0] * radial);
      }
    }
    for (int i = 0; i < m; ++i) {
      int i1 = (i + 1) % m;
      for (int j = 0; j < nj; ++j) {
        faces.push_back({idx[i][j], idx[i1][j], idx[i1][j + 1]});
        faces.push_back({idx[i][j], idx[i1][j + 1], idx[i][j + 1]});
      }
    }
  }
  if (loops != necks) throw ValidationError("unexpected number of cap boundaries");
  orient_consistently(faces);

  // Drop cap interiors.
  std::vector<int> remap(pos.size(), -1);
  std::vector<Vec4> compact;
  for (auto& f : faces)
    for (int& v : f) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(compact.size());
        compact.push_back(pos[v]);
      }
      v = remap[v];
    }
  return finish_r3(std::move(compact), std::move(faces));
}

}  // namespace

TriMesh orient_outward(const TriMesh& mesh) {
  if (mesh.ambient_dim() != 3 || signed_volume(mesh) >= 0.0) return mesh;
  std::vector<Face> f(mesh.faces().begin(), mesh.faces().end());
  for (auto& x : f) std::swap(x[1], x[2]);
  return TriMesh::create(3, std::vector<Vec4>(mesh.positions().begin(), mesh.positions().end()),
                         std::move(f));
}

TriMesh icosphere(int subdivisions, double radius) {
  if (subdivisions < 0 || subdivisions > 8)
    throw ValidationError("icosphere subdivisions must be in [0, 8]");
  if (!(radius > 0.0)) throw ValidationError("sphere radius must be positive");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> p = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                         {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                         {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& x : p) x.normalize();
  std::vector<Face> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                         {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                         {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                         {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::unordered_map<std::uint64_t, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = dkey(std::min(a, b), std::max(a, b));
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      p.push_back((p[a] + p[b]).normalized());
      int id = static_cast<int>(p.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<Face> g;
    g.reserve(4 * f.size());
    for (const auto& x : f) {
      int a = midpoint(x[0], x[1]), b = midpoint(x[1], x[2]), c = midpoint(x[2], x[0]);
      g.push_back({x[0], a, c});
      g.push_back({x[1], b, a});
      g.push_back({x[2], c, b});
      g.push_back({a, b, c});
    }
    f = std::move(g);
  }
  std::vector<Vec4> pos;
  pos.reserve(p.size());
  for (const auto& x : p) pos.emplace_back(radius * x[0], radius * x[1], radius * x[2], 0.0);
  return finish_r3(std::move(pos), std::move(f));
}

TriMesh torus(double major, double minor, int nu, int nv) {
  if (!(minor > 0.0) || !(major > minor))
    throw ValidationError("torus radii must satisfy R > r > 0");
  require_resolution(nu, "torus u");
  require_resolution(nv, "torus v");
  std::vector<Vec4> pos;
  pos.reserve(nu * nv);
  for (int i = 0; i < nu; ++i) {
    double u = 2.0 * kPi * i / nu;
    for (int j = 0; j < nv; ++j) {
      double v = 2.0 * kPi * j / nv;
      double w = major + minor * std::cos(v);
      pos.emplace_back(w * std::cos(u), w * std::sin(u), minor * std::sin(v), 0.0);
    }
  }
  return finish_r3(std::move(pos), grid_faces(nu, nv));
}

TriMesh clifford_r4(int ns, int nt) {
  require_resolution(ns, "clifford s");
  require_resolution(nt, "clifford t");
  std::vector<Vec4> pos;
  const double k = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < ns; ++i) {
    double s = 2.0 * kPi * i / ns;
    for (int j = 0; j < nt; ++j) {
      double t = 2.0 * kPi * j / nt;
      pos.emplace_back(k * std::cos(s), k * std::sin(s), k * std::cos(t), k * std::sin(t));
    }
  }
  return TriMesh::create(4, std::move(pos), grid_faces(ns, nt));
}

TriMesh clifford_stereo(int ns, int nt) {
  require_resolution(ns, "clifford s");
  require_resolution(nt, "clifford t");
  std::vector<Vec4> pos;
  const double k = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < ns; ++i) {
    double s = 2.0 * kPi * i / ns;
    for (int j = 0; j < nt; ++j) {
      double t = 2.0 * kPi * j / nt;
      double d = 1.0 - k * std::sin(t);
      pos.emplace_back(k * std::cos(s) / d, k * std::sin(s) / d, k * std::cos(t) / d, 0.0);
    }
  }
  return finish_r3(std::move(pos), grid_faces(ns, nt));
}

Vec4 perturbed_clifford_point(double s, double t, double amplitude) {
  const double k = 1.0 / std::sqrt(2.0);
  Vec4 x(k * std::cos(s), k * std::sin(s), k * std::cos(t), k * std::sin(t));
  Vec4 n(k * std::cos(s), k * std::sin(s), -k * std::cos(t), -k * std::sin(t));
  return x + amplitude * (std::cos(2.0 * s + t) * x + std::sin(s - 2.0 * t) * n);
}

TriMesh perturbed_clifford(int ns, int nt, double amplitude) {
  require_resolution(ns, "clifford s");
  require_resolution(nt, "clifford t");
  if (!(std::abs(amplitude) < 0.25)) throw ValidationError("perturbation amplitude too large");
  std::vector<Vec4> pos;
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j)
      pos.push_back(perturbed_clifford_point(2.0 * kPi * i / ns, 2.0 * kPi * j / nt, amplitude));
  return TriMesh::create(4, std::move(pos), grid_faces(ns, nt));
}

TriMesh necked_spheres(const NeckedSpheresSpec& sp) {
  if (sp.genus < 1) throw ValidationError("necked spheres need genus >= 1");
  if (!(sp.gap > 0.0) || !(sp.gap < 1.0)) throw ValidationError("gap must be in (0, 1)");
  if (!(sp.neck_radius > 0.0) || !(sp.neck_radius < sp.gap))
    throw ValidationError("neck radius must be in (0, gap)");
  if (!(sp.blend > 1.0)) throw ValidationError("blend factor must exceed 1");
  if (sp.genus == 1) {
    require_resolution(sp.azimuth, "neck azimuth");
    return necked_genus_one(sp);
  }
  if (sp.sphere_subdivisions < 2) throw ValidationError("sphere subdivisions must be >= 2");
  return necked_higher_genus(sp);
}

TriMesh generate(const SurfaceSpec& spec) {
  return std::visit(
      [](const auto& s) -> TriMesh {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SphereSpec>) return icosphere(s.subdivisions, s.radius);
        else if constexpr (std::is_same_v<T, TorusSpec>) return torus(s.major, s.minor, s.nu, s.nv);
        else if constexpr (std::is_same_v<T, CliffordR4Spec>) return clifford_r4(s.ns, s.nt);
        else if constexpr (std::is_same_v<T, CliffordStereoSpec>) return clifford_stereo(s.ns, s.nt);
        else if constexpr (std::is_same_v<T, PerturbedCliffordSpec>)
          return perturbed_clifford(s.ns, s.nt, s.amplitude);
        else return necked_spheres(s);
      },
      spec);
}

std::string spec_name(const SurfaceSpec& spec) {
  static const char* names[] = {"sphere", "torus", "clifford_r4", "clifford_stereo",
                                "perturbed_clifford", "necked_spheres"};
  return names[spec.index()];
}

}  // namespace willmore
