#include "willmore/moduli.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>

#include "willmore/intrinsic.hpp"
#include "willmore/mesh_io.hpp"
#include "willmore/summation.hpp"

namespace willmore {

namespace {

// +1 when the face's edge opposite corner k runs v0 -> v1.
int face_edge_sign(const TriMesh& mesh, int f, int k) {
  const auto& fc = mesh.face(f);
  int a = fc[(k + 1) % 3];
  return mesh.edge(mesh.face_edges(f)[k]).v0 == a ? 1 : -1;
}

double oriented_value(const TriMesh& mesh, const std::vector<double>& z, int a, int b) {
  int e = mesh.find_edge(a, b);
  return mesh.edge(e).v0 == a ? z[e] : -z[e];
}

}  // namespace

HomologyBasis homology_basis(const TriMesh& mesh) {
  if (mesh.genus() != 1) throw ValidationError("homology basis requires a torus (genus 1)");
  const int nv = mesh.num_vertices(), ne = mesh.num_edges(), nf = mesh.num_faces();

  // Spanning tree of the primal graph.
  std::vector<int> parent_edge(nv, -1), parent(nv, -1);
  std::vector<char> in_tree(ne, 0), seen(nv, 0);
  {
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : mesh.vertex_neighbors(v)) {
        if (seen[w]) continue;
        seen[w] = 1;
        int e = mesh.find_edge(v, w);
        parent[w] = v;
        parent_edge[w] = e;
        in_tree[e] = 1;
        q.push(w);
      }
    }
  }

  // Spanning tree of the dual graph avoiding primal tree edges.
  std::vector<int> face_parent_edge(nf, -1), order;
  std::vector<char> in_cotree(ne, 0), fseen(nf, 0);
  {
    std::queue<int> q;
    q.push(0);
    fseen[0] = 1;
    while (!q.empty()) {
      int f = q.front();
      q.pop();
      order.push_back(f);
      for (int k = 0; k < 3; ++k) {
        int e = mesh.face_edges(f)[k];
        if (in_tree[e]) continue;
        const auto& ef = mesh.edge_faces(e);
        int g = ef[0] == f ? ef[1] : ef[0];
        if (fseen[g]) continue;
        fseen[g] = 1;
        face_parent_edge[g] = e;
        in_cotree[e] = 1;
        q.push(g);
      }
    }
  }

  std::vector<int> generators;
  for (int e = 0; e < ne; ++e)
    if (!in_tree[e] && !in_cotree[e]) generators.push_back(e);
  if (generators.size() != 2) throw SolverError("tree-cotree split did not leave two generators");

  HomologyBasis hb;
  auto path_to_root = [&](int v) {
    std::vector<SignedEdge> p;
    while (parent[v] >= 0) {
      int e = parent_edge[v];
      p.push_back({e, mesh.edge(e).v0 == v ? 1 : -1});
      v = parent[v];
    }
    return p;
  };
  for (int k = 0; k < 2; ++k) {
    int e = generators[k];
    auto up = path_to_root(mesh.edge(e).v0);
    std::vector<SignedEdge> cyc;
    for (auto it = up.rbegin(); it != up.rend(); ++it) cyc.push_back({it->edge, -it->sign});
    cyc.push_back({e, 1});
    for (const auto& s : path_to_root(mesh.edge(e).v1)) cyc.push_back(s);
    hb.cycles[k] = std::move(cyc);
  }

  for (int k = 0; k < 2; ++k) {
    std::vector<double> z(ne, 0.0);
    z[generators[k]] = 1.0;
    // Leaves first: each face fixes the value on the edge to its parent.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int f = *it;
      int pe = face_parent_edge[f];
      if (pe < 0) continue;
      double s = 0.0;
      int sp = 0;
      for (int j = 0; j < 3; ++j) {
        int e = mesh.face_edges(f)[j];
        int sg = face_edge_sign(mesh, f, j);
        if (e == pe)
          sp = sg;
        else
          s += sg * z[e];
      }
      z[pe] = -sp * s;
    }
    for (int f = 0; f < nf; ++f) {
      double s = 0.0;
      for (int j = 0; j < 3; ++j) s += face_edge_sign(mesh, f, j) * z[mesh.face_edges(f)[j]];
      if (s != 0.0) throw SolverError("cocycle is not closed");
    }
    hb.cocycles[k] = std::move(z);
  }

  // Alexander-Whitney cup product with the global vertex order, evaluated
  // on the oriented fundamental class.
  double cup = 0.0;
  for (int f = 0; f < nf; ++f) {
    std::array<int, 3> s = mesh.face(f);
    int sign = 1;
    if (s[0] > s[1]) { std::swap(s[0], s[1]); sign = -sign; }
    if (s[1] > s[2]) { std::swap(s[1], s[2]); sign = -sign; }
    if (s[0] > s[1]) { std::swap(s[0], s[1]); sign = -sign; }
    cup += sign * oriented_value(mesh, hb.cocycles[0], s[0], s[1]) *
           oriented_value(mesh, hb.cocycles[1], s[1], s[2]);
  }
  hb.cup_product = static_cast<int>(std::lround(cup));
  if (std::abs(hb.cup_product) != 1 || cup != hb.cup_product)
    throw SolverError("homology generators fail the intersection certificate");
  return hb;
}

std::pair<double, double> reduce_modulus(double re, double im) {
  if (!(im > 0.0)) throw ValidationError("modulus must lie in the upper half plane");
  for (int i = 0; i < 10000; ++i) {
    re -= std::round(re);
    double n = re * re + im * im;
    if (n >= 1.0 - 1e-14) break;
    re = -re / n;
    im = im / n;
  }
  return {std::abs(re), im};
}

TorusModulus torus_modulus(const TriMesh& mesh, const UniformizationResult& uni) {
  if (mesh.genus() != 1) throw ValidationError("torus modulus requires genus 1");
  if (static_cast<int>(uni.u.size()) != mesh.num_vertices())
    throw ValidationError("conformal factor does not match the mesh");
  if (!(uni.residual_inf <= 1e-8)) throw ValidationError("uniformization residual too large");

  HomologyBasis hb = homology_basis(mesh);
  const int ne = mesh.num_edges(), nv = mesh.num_vertices();
  std::vector<double> l = edge_lengths(mesh);
  for (int e = 0; e < ne; ++e) {
    const auto& ed = mesh.edge(e);
    l[e] *= std::exp(-0.5 * (uni.u[ed.v0] + uni.u[ed.v1]));
  }
  IntrinsicGeometry g0 = intrinsic_geometry(mesh, l);
  Eigen::SparseMatrix<double> L = cotan_laplacian(mesh, g0);
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-13);
  cg.setMaxIterations(std::max(1000, 20 * nv));
  cg.compute(L);

  std::array<std::vector<double>, 2> h;
  for (int k = 0; k < 2; ++k) {
    const auto& z = hb.cocycles[k];
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv);
    for (int e = 0; e < ne; ++e) {
      double y = g0.edge_weight[e] * z[e];
      rhs[mesh.edge(e).v0] -= y;
      rhs[mesh.edge(e).v1] += y;
    }
    Eigen::VectorXd alpha = cg.solve(rhs);
    if (cg.info() != Eigen::Success) throw SolverError("harmonic projection did not converge");
    h[k].resize(ne);
    for (int e = 0; e < ne; ++e)
      h[k][e] = z[e] - (alpha[mesh.edge(e).v1] - alpha[mesh.edge(e).v0]);
  }
  TorusModulus tm;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      NeumaierSum s;
      for (int e = 0; e < ne; ++e) s.add(g0.edge_weight[e] * h[j][e] * h[k][e]);
      tm.dirichlet[j][k] = s.value();
    }
  tm.raw_re = -tm.dirichlet[0][1] / tm.dirichlet[1][1];
  tm.raw_im = 1.0 / tm.dirichlet[1][1];
  auto [a, b] = reduce_modulus(tm.raw_re, tm.raw_im);
  tm.a = a;
  tm.b = b;
  tm.systole = systole_estimate(tm);
  return tm;
}

double systole_estimate(const TorusModulus& m) { return 1.0 / std::sqrt(m.b); }

SweepTable compactness_sweep(const std::vector<std::pair<std::string, TriMesh>>& family,
                             const SweepOptions& opt) {
  SweepTable t;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [id, mesh] : family) {
    CurvatureBundle b = curvature_bundle(mesh);
    SweepRow r;
    r.mesh_id = id;
    r.willmore = b.willmore;
    r.tracefree_energy = b.tracefree_energy;
    r.member = class_membership(b.willmore, omega_constant(opt.n, mesh.genus(), opt.beta_table),
                                opt.delta);
    if (mesh.genus() == 1) {
      UniformizationResult u = solve_liouville(mesh, b);
      TorusModulus m = torus_modulus(mesh, u);
      r.a = m.a;
      r.b = m.b;
      r.systole = m.systole;
      r.max_abs_u = u.max_abs_u;
    } else {
      r.a = r.b = r.systole = r.max_abs_u = nan;
    }
    if (opt.degeneration_b && r.member && r.b > *opt.degeneration_b)
      t.degenerate_members.push_back(id);
    t.rows.push_back(r);
  }
  return t;
}

std::string sweep_csv(const SweepTable& t) {
  std::ostringstream o;
  o << "mesh_id,W,E,member,a,b,systole,max_abs_u\n";
  for (const auto& r : t.rows)
    o << r.mesh_id << ',' << format_double(r.willmore) << ',' << format_double(r.tracefree_energy)
      << ',' << (r.member ? "true" : "false") << ',' << format_double(r.a) << ','
      << format_double(r.b) << ',' << format_double(r.systole) << ','
      << format_double(r.max_abs_u) << '\n';
  return o.str();
}

}  // namespace willmore
