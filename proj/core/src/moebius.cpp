#include "willmore/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>

#include "willmore/summation.hpp"

namespace willmore {

namespace {

struct LatticeKey {
  std::array<std::int32_t, 4> i{0, 0, 0, 0};
  bool operator==(const LatticeKey& o) const { return i == o.i; }
  bool operator<(const LatticeKey& o) const { return i < o.i; }
};

struct LatticeKeyHash {
  std::size_t operator()(const LatticeKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : k.i) {
      h ^= static_cast<std::uint32_t>(x);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

std::int32_t lattice_index(double x) {
  if (!(std::abs(x) < 2e9)) throw SolverError("lattice index overflow");
  return static_cast<std::int32_t>(x);
}

template <class F>
void for_each_lattice_point_in_ball(int dim, const Vec4& y, double r, double h, F&& f) {
  std::array<std::int32_t, 4> lo{0, 0, 0, 0}, hi{0, 0, 0, 0};
  for (int k = 0; k < dim; ++k) {
    lo[k] = lattice_index(std::ceil((y[k] - r) / h));
    hi[k] = lattice_index(std::floor((y[k] + r) / h));
  }
  const double r2 = r * r;
  LatticeKey key;
  for (std::int32_t a = lo[0]; a <= hi[0]; ++a) {
    double da = a * h - y[0];
    double s0 = da * da;
    if (s0 >= r2) continue;
    for (std::int32_t b = lo[1]; b <= hi[1]; ++b) {
      double db = b * h - y[1];
      double s1 = s0 + db * db;
      if (s1 >= r2) continue;
      for (std::int32_t c = lo[2]; c <= hi[2]; ++c) {
        double dc = c * h - y[2];
        double s2 = s1 + dc * dc;
        if (s2 >= r2) continue;
        for (std::int32_t d = lo[3]; d <= hi[3]; ++d) {
          double dd = dim == 4 ? d * h - y[3] : 0.0;
          if (s2 + dd * dd >= r2) continue;
          key.i = {a, b, c, d};
          f(key);
        }
      }
    }
  }
}

// Vertex hash with cubic cells.
class PointGrid {
 public:
  PointGrid(const TriMesh& mesh, double cell) : mesh_(mesh), cell_(cell) {
    for (int v = 0; v < mesh.num_vertices(); ++v) cells_[key_of(mesh.position(v))].push_back(v);
  }

  template <class F>
  void for_each_within(const Vec4& x, double r, F&& f) const {
    const int dim = mesh_.ambient_dim();
    LatticeKey base = key_of(x);
    int span = static_cast<int>(std::ceil(r / cell_));
    const double r2 = r * r;
    std::array<int, 4> off{0, 0, 0, 0};
    std::array<int, 4> lim{span, span, span, dim == 4 ? span : 0};
    for (off[0] = -lim[0]; off[0] <= lim[0]; ++off[0])
      for (off[1] = -lim[1]; off[1] <= lim[1]; ++off[1])
        for (off[2] = -lim[2]; off[2] <= lim[2]; ++off[2])
          for (off[3] = -lim[3]; off[3] <= lim[3]; ++off[3]) {
            LatticeKey k = base;
            for (int i = 0; i < 4; ++i) k.i[i] += off[i];
            auto it = cells_.find(k);
            if (it == cells_.end()) continue;
            for (int v : it->second)
              if ((mesh_.position(v) - x).squaredNorm() < r2) f(v);
          }
  }

 private:
  LatticeKey key_of(const Vec4& x) const {
    LatticeKey k;
    for (int i = 0; i < mesh_.ambient_dim(); ++i) k.i[i] = lattice_index(std::floor(x[i] / cell_));
    return k;
  }
  const TriMesh& mesh_;
  double cell_;
  std::unordered_map<LatticeKey, std::vector<int>, LatticeKeyHash> cells_;
};

Vec4 closest_point_on_triangle(const Vec4& p, const Vec4& a, const Vec4& b, const Vec4& c) {
  Vec4 ab = b - a, ac = c - a, ap = p - a;
  double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  Vec4 bp = p - b;
  double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;
  Vec4 cp = p - c;
  double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;
  double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double point_triangle_distance(const TriMesh& mesh, int f, const Vec4& x) {
  const auto& fc = mesh.face(f);
  return (x - closest_point_on_triangle(x, mesh.position(fc[0]), mesh.position(fc[1]),
                                        mesh.position(fc[2])))
      .norm();
}

struct Evaluation {
  bool exceeds = false;
  double energy = 0.0;
  Vec4 center = Vec4::Zero();
};

}  // namespace

Vec4 MobiusMap::apply(const Vec4& x) const {
  Vec4 y = x;
  for (const auto& s : steps) {
    if (auto* t = std::get_if<Translate>(&s)) {
      y += t->offset;
    } else if (auto* d = std::get_if<Dilate>(&s)) {
      y *= d->factor;
    } else {
      const auto& inv = std::get<Invert>(s);
      Vec4 r = y - inv.center;
      y = r / r.squaredNorm() + inv.center;
    }
  }
  return y;
}

TriMesh apply(const MobiusMap& map, const TriMesh& mesh) {
  std::vector<Vec4> p(mesh.positions().begin(), mesh.positions().end());
  double diam = mesh.diameter();
  for (const auto& s : map.steps) {
    if (auto* t = std::get_if<Translate>(&s)) {
      for (auto& x : p) x += t->offset;
    } else if (auto* d = std::get_if<Dilate>(&s)) {
      if (!(d->factor > 0.0) || !std::isfinite(d->factor))
        throw ValidationError("dilation factor must be positive");
      for (auto& x : p) x *= d->factor;
      diam *= d->factor;
    } else {
      const auto& inv = std::get<Invert>(s);
      double floor = 1e-9 * diam;
      Vec4 lo = Vec4::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
      for (auto& x : p) {
        Vec4 r = x - inv.center;
        if (r.norm() < floor) throw ValidationError("singular inversion: center lies on the surface");
        x = r / r.squaredNorm() + inv.center;
        lo = lo.cwiseMin(x);
        hi = hi.cwiseMax(x);
      }
      diam = (hi - lo).norm();
    }
  }
  if (mesh.ambient_dim() == 3)
    for (auto& x : p) x[3] = 0.0;
  return mesh.with_positions(std::move(p));
}

namespace {

// Sums of atoms in open balls of a fixed radius centered on a lattice.
class LatticeContent {
 public:
  LatticeContent(const TriMesh& mesh, std::span<const double> atoms, double radius, double pitch)
      : dim_(mesh.ambient_dim()), pitch_(pitch) {
    if (!(radius > 0.0) || !(pitch > 0.0))
      throw ValidationError("ball radius and pitch must be positive");
    Vec4 a = mesh.position(0), b = a;
    for (const auto& p : mesh.positions()) {
      a = a.cwiseMin(p);
      b = b.cwiseMax(p);
    }
    double cells = 1.0;
    for (int k = 0; k < dim_; ++k) {
      lo_[k] = lattice_index(std::ceil((a[k] - radius) / pitch));
      ext_[k] = lattice_index(std::floor((b[k] + radius) / pitch)) - lo_[k] + 1;
      cells *= ext_[k];
    }
    dense_ = cells <= 3e7;
    if (dense_) {
      content_.assign(static_cast<std::size_t>(cells), 0.0);
      touched_.assign(content_.size(), 0);
    }
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      double m = atoms[v];
      if (m == 0.0) continue;
      for_each_lattice_point_in_ball(dim_, mesh.position(v), radius, pitch, [&](const LatticeKey& k) {
        if (dense_) {
          std::size_t i = flat(k);
          content_[i] += m;
          touched_[i] = 1;
        } else {
          sparse_[k] += m;
        }
      });
    }
  }

  double at(const LatticeKey& k) const {
    if (dense_) {
      for (int i = 0; i < dim_; ++i)
        if (k.i[i] < lo_[i] || k.i[i] >= lo_[i] + ext_[i]) return 0.0;
      return content_[flat(k)];
    }
    auto it = sparse_.find(k);
    return it == sparse_.end() ? 0.0 : it->second;
  }

  LatticeKey nearest(const Vec4& x) const {
    LatticeKey k;
    for (int i = 0; i < dim_; ++i) k.i[i] = lattice_index(std::round(x[i] / pitch_));
    return k;
  }

  // Largest content; ties go to the lexicographically smallest key.
  BallMaximum maximum() const {
    BallMaximum best;
    LatticeKey best_key;
    bool any = false;
    if (dense_) {
      std::size_t arg = 0;
      for (std::size_t i = 0; i < content_.size(); ++i)
        if (touched_[i] && (!any || content_[i] > content_[arg])) {
          arg = i;
          any = true;
        }
      if (any) {
        std::size_t rem = arg;
        for (int i = dim_ - 1; i >= 0; --i) {
          best_key.i[i] = lo_[i] + static_cast<std::int32_t>(rem % ext_[i]);
          rem /= ext_[i];
        }
        best.energy = content_[arg];
      }
    } else {
      for (const auto& [k, e] : sparse_)
        if (!any || e > best.energy || (e == best.energy && k < best_key)) {
          any = true;
          best.energy = e;
          best_key = k;
        }
    }
    for (int i = 0; i < dim_; ++i) best.center[i] = best_key.i[i] * pitch_;
    return best;
  }

 private:
  std::size_t flat(const LatticeKey& k) const {
    std::size_t idx = 0;
    for (int i = 0; i < dim_; ++i) idx = idx * ext_[i] + static_cast<std::size_t>(k.i[i] - lo_[i]);
    return idx;
  }

  int dim_;
  double pitch_;
  bool dense_ = true;
  std::array<std::int32_t, 4> lo_{0, 0, 0, 0}, ext_{1, 1, 1, 1};
  std::vector<double> content_;
  std::vector<char> touched_;
  std::unordered_map<LatticeKey, double, LatticeKeyHash> sparse_;
};

}  // namespace

BallMaximum lattice_ball_maximum(const TriMesh& mesh, std::span<const double> atoms,
                                 double radius, double pitch) {
  return LatticeContent(mesh, atoms, radius, pitch).maximum();
}

DilationCalibration calibrate_dilation(const TriMesh& mesh, const CurvatureBundle& bundle) {
  const auto atoms = bundle.tracefree_atoms();
  DilationCalibration cal;
  cal.measure_total = compensated_sum(atoms);
  const double half = 0.5 * cal.measure_total;
  if (!(cal.measure_total > 0.0))
    throw ValidationError("tracefree energy vanishes; surface is totally umbilic");
  for (double m : atoms)
    if (m > half)
      throw ValidationError(
          "resolution insufficient: a single vertex carries more than half the tracefree energy");

  // Does some ball of radius r (original units), centered on the pitch r/4
  // lattice or at a vertex, carry more than E/2?
  auto evaluate = [&](double r) {
    ++cal.evaluations;
    Evaluation ev;
    const double pitch = 0.25 * r;
    LatticeContent lattice(mesh, atoms, r, pitch);
    BallMaximum bm = lattice.maximum();
    if (bm.energy > half) {
      ev.exceeds = true;
      ev.energy = bm.energy;
      ev.center = bm.center;
      return ev;
    }
    // A vertex ball lies inside the enlarged ball at its nearest lattice
    // point; only vertices whose enlarged ball is heavy need an exact sum.
    const double slack = 0.5 * pitch * std::sqrt(static_cast<double>(mesh.ambient_dim()));
    LatticeContent enlarged(mesh, atoms, r + slack, pitch);
    std::optional<PointGrid> grid;
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      if (enlarged.at(enlarged.nearest(mesh.position(v))) <= half) continue;
      if (!grid) grid.emplace(mesh, r);
      double s = 0.0;
      grid->for_each_within(mesh.position(v), r, [&](int w) { s += atoms[w]; });
      if (s > half) {
        ev.exceeds = true;
        ev.energy = s;
        ev.center = mesh.position(v);
        return ev;
      }
    }
    ev.energy = bm.energy;
    ev.center = bm.center;
    return ev;
  };

  double hi = 1.01 * mesh.diameter();
  Evaluation at_hi = evaluate(hi);
  if (!at_hi.exceeds) throw SolverError("dilation calibration: full ball does not exceed E/2");
  double lo = 0.5 * hi;
  for (int i = 0;; ++i) {
    if (i > 80) throw SolverError("dilation calibration: no admissible radius found");
    Evaluation e = evaluate(lo);
    if (!e.exceeds) break;
    hi = lo;
    at_hi = e;
    lo *= 0.5;
  }
  while (hi / lo - 1.0 > 1e-3) {
    double mid = std::sqrt(lo * hi);
    Evaluation e = evaluate(mid);
    if (e.exceeds) {
      hi = mid;
      at_hi = e;
    } else {
      lo = mid;
    }
  }
  cal.lambda = 1.0 / lo;
  cal.x0 = cal.lambda * at_hi.center;
  cal.x0_energy = at_hi.energy;
  return cal;
}

double distance_to_surface(const TriMesh& mesh, const Vec4& x) {
  double best = std::numeric_limits<double>::infinity();
  for (int f = 0; f < mesh.num_faces(); ++f) best = std::min(best, point_triangle_distance(mesh, f, x));
  return best;
}

Vec4 find_empty_ball(const TriMesh& mesh, const Vec4& x0) {
  const int dim = mesh.ambient_dim();
  // Faces bucketed by unit cells of their bounding boxes.
  std::unordered_map<LatticeKey, std::vector<int>, LatticeKeyHash> cells;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& fc = mesh.face(f);
    Vec4 lo = mesh.position(fc[0]).cwiseMin(mesh.position(fc[1])).cwiseMin(mesh.position(fc[2]));
    Vec4 hi = mesh.position(fc[0]).cwiseMax(mesh.position(fc[1])).cwiseMax(mesh.position(fc[2]));
    std::array<std::int32_t, 4> a{0, 0, 0, 0}, b{0, 0, 0, 0};
    for (int k = 0; k < dim; ++k) {
      a[k] = lattice_index(std::floor(lo[k]));
      b[k] = lattice_index(std::floor(hi[k]));
    }
    LatticeKey key;
    for (key.i[0] = a[0]; key.i[0] <= b[0]; ++key.i[0])
      for (key.i[1] = a[1]; key.i[1] <= b[1]; ++key.i[1])
        for (key.i[2] = a[2]; key.i[2] <= b[2]; ++key.i[2])
          for (key.i[3] = a[3]; key.i[3] <= b[3]; ++key.i[3]) cells[key].push_back(f);
  }
  auto empty = [&](const Vec4& x) {
    LatticeKey base;
    for (int k = 0; k < dim; ++k) base.i[k] = lattice_index(std::floor(x[k]));
    int w = dim == 4 ? 1 : 0;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c)
          for (int d = -w; d <= w; ++d) {
            LatticeKey k = base;
            k.i[0] += a;
            k.i[1] += b;
            k.i[2] += c;
            k.i[3] += d;
            auto it = cells.find(k);
            if (it == cells.end()) continue;
            for (int f : it->second)
              if (point_triangle_distance(mesh, f, x) <= 1.0) return false;
          }
    return true;
  };

  const double pitch = 0.5;
  const int max_shell = static_cast<int>(std::ceil(1e3 / pitch));
  for (int s = 0; s <= max_shell; ++s) {
    bool found = false;
    double best_d = 0.0;
    Vec4 best = x0;
    int w = dim == 4 ? s : 0;
    for (int a = -s; a <= s; ++a)
      for (int b = -s; b <= s; ++b)
        for (int c = -s; c <= s; ++c)
          for (int d = -w; d <= w; ++d) {
            int m = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
            if (m != s) continue;
            Vec4 off(a, b, c, d);
            double dist = pitch * off.norm();
            if (found && dist >= best_d) continue;
            Vec4 x = x0 + pitch * off;
            if (empty(x)) {
              found = true;
              best_d = dist;
              best = x;
            }
          }
    if (found) return best;
  }
  throw SolverError("no empty unit ball within 1e3 of the heavy ball center");
}

NormalizationResult normalize(const TriMesh& mesh, const CurvatureBundle& bundle,
                              const NormalizeOptions& options) {
  NormalizationCertificate cert;
  cert.input_tracefree_energy = bundle.tracefree_measure_total();
  cert.umbilic = cert.input_tracefree_energy < options.umbilic_fraction * bundle.willmore;
  if (cert.umbilic) {
    cert.lambda = 2.0 / mesh.diameter();
    Vec4 c = Vec4::Zero();
    for (const auto& p : mesh.positions()) c += p;
    cert.x0 = cert.lambda * c / mesh.num_vertices();
  } else {
    DilationCalibration cal = calibrate_dilation(mesh, bundle);
    cert.lambda = cal.lambda;
    cert.x0 = cal.x0;
  }
  TriMesh dilated = apply(MobiusMap{{Dilate{cert.lambda}}}, mesh);
  cert.empty_center = find_empty_ball(dilated, cert.x0);
  cert.map.steps = {Dilate{cert.lambda}, Translate{-cert.empty_center}, Invert{Vec4::Zero()}};
  TriMesh out = apply(cert.map, mesh);

  for (const auto& p : out.positions()) cert.enclosing_radius = std::max(cert.enclosing_radius, p.norm());
  double big_r = (cert.empty_center - cert.x0).norm() + 1.0;
  cert.rho0 = 0.5 * (std::sqrt(1.0 + 1.0 / (big_r * big_r)) - 1.0);

  CurvatureBundle b2 = curvature_bundle(out);
  auto atoms = b2.tracefree_atoms();
  cert.tracefree_energy = compensated_sum(atoms);
  cert.max_ball_energy = lattice_ball_maximum(out, atoms, cert.rho0, 0.25 * cert.rho0).energy;
  bool ball_ok =
      cert.umbilic || cert.max_ball_energy <= 0.5 * cert.tracefree_energy * (1.0 + options.ball_tolerance);
  cert.satisfied = cert.enclosing_radius <= 1.0 + 1e-6 && ball_ok;
  return {std::move(out), std::move(cert)};
}

}  // namespace willmore
