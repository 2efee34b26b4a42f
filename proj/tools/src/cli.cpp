#include "willmore/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "willmore/curvature.hpp"
#include "willmore/error.hpp"
#include "willmore/gaussmap4.hpp"
#include "willmore/generators.hpp"
#include "willmore/mesh_io.hpp"
#include "willmore/moduli.hpp"
#include "willmore/moebius.hpp"
#include "willmore/parallel.hpp"
#include "willmore/uniformize.hpp"

namespace willmore::cli {

namespace {

using nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

struct RunConfig {
  std::string command;
  std::string gen;
  std::string input;
  int res = 0;  // 0: generator default
  int subdiv = 4;
  double major = 2.0;
  double minor = 1.0;
  double amplitude = 0.05;
  int genus = 1;
  double gap = 0.2;
  double neck_radius = 0.04;
  int n = 3;
  double delta = 0.1;
  std::vector<std::string> beta_args;
  std::map<int, double> beta;
  bool beta1_conjectured = true;
  std::string out = ".";
  std::vector<std::string> tol_args;
  std::map<std::string, double> tol;
  int threads = 1;
  // sweep
  std::string family = "necked";
  std::vector<double> gaps{0.2, 0.1, 0.05, 0.025};
  std::vector<double> ratios{1.2, std::numbers::sqrt2, 2.0, 4.0};
  double neck_ratio = 0.2;
  std::optional<double> degeneration_b;
  // gausscheck
  int xi_samples = 100;
  double xi_step = 1e-4;
  unsigned seed = 1;
};

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"cg_tolerance", 1e-12},     {"residual_tolerance", 1e-10}, {"max_newton_iterations", 100},
      {"umbilic_fraction", 1e-2},  {"ball_tolerance", 0.05},      {"li_yau_margin", 0.05},
      {"h_threshold", 1e-8},       {"degree_tolerance", 0.2}};
  return t;
}

ordered_json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

ordered_json vec(const Vec4& x, int dim) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < dim; ++i) a.push_back(num(x[i]));
  return a;
}

std::pair<std::string, std::string> split_assignment(const std::string& s, const char* what) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
    throw ValidationError(std::string(what) + " must have the form KEY=VALUE: " + s);
  return {s.substr(0, eq), s.substr(eq + 1)};
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || !std::isfinite(v)) throw ValidationError("invalid number for " + what + ": " + s);
  return v;
}

void resolve(RunConfig& c) {
  c.beta = {{0, 4.0 * kPi}, {1, 2.0 * kPi * kPi}};
  for (const auto& a : c.beta_args) {
    auto [k, v] = split_assignment(a, "--beta");
    double g = parse_double(k, "--beta genus");
    if (g < 0 || g != std::floor(g)) throw ValidationError("--beta genus must be a non-negative integer");
    double val = parse_double(v, "--beta " + k);
    if (!(val > 0.0)) throw ValidationError("beta values must be positive");
    c.beta[static_cast<int>(g)] = val;
    if (g == 1) c.beta1_conjectured = false;
  }
  c.tol = default_tolerances();
  for (const auto& a : c.tol_args) {
    auto [k, v] = split_assignment(a, "--tol");
    if (!c.tol.count(k)) throw ValidationError("unknown tolerance: " + k);
    double val = parse_double(v, "--tol " + k);
    if (!(val > 0.0)) throw ValidationError("tolerance " + k + " must be positive");
    c.tol[k] = val;
  }
  if (c.n != 3 && c.n != 4) throw ValidationError("--n must be 3 or 4");
  if (!(c.delta > 0.0)) throw ValidationError("delta must be positive");
  if (c.threads < 0) throw ValidationError("--threads must be non-negative");
  if (c.command != "sweep") {
    if (c.gen.empty() == c.input.empty())
      throw ValidationError("exactly one of --gen and --input is required");
  }
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  if (c.command == "sweep") {
    j["family"] = c.family;
    if (c.family == "necked") {
      j["p"] = c.genus;
      j["gaps"] = c.gaps;
      j["neck_ratio"] = c.neck_ratio;
    } else {
      j["ratios"] = c.ratios;
    }
  } else if (!c.input.empty()) {
    j["input"] = c.input;
  } else {
    j["gen"] = c.gen;
    if (c.gen == "sphere") {
      j["subdiv"] = c.subdiv;
    } else if (c.gen == "torus") {
      j["major"] = c.major;
      j["minor"] = c.minor;
    } else if (c.gen == "perturbed-clifford") {
      j["amplitude"] = c.amplitude;
    } else if (c.gen == "necked") {
      j["genus"] = c.genus;
      j["gap"] = c.gap;
      j["neck_radius"] = c.neck_radius;
      j["subdiv"] = c.subdiv;
    }
  }
  j["res"] = c.res;
  j["n"] = c.n;
  j["delta"] = c.delta;
  ordered_json b = ordered_json::object();
  for (const auto& [g, v] : c.beta) b[std::to_string(g)] = v;
  j["beta"] = b;
  j["beta1_conjectured"] = c.beta1_conjectured;
  ordered_json t = ordered_json::object();
  for (const auto& [k, v] : c.tol) t[k] = v;
  j["tol"] = t;
  if (c.command == "gausscheck") {
    j["xi_samples"] = c.xi_samples;
    j["xi_step"] = c.xi_step;
    j["seed"] = c.seed;
  }
  if (c.degeneration_b) j["degeneration_b"] = *c.degeneration_b;
  return j;
}

ordered_json report_header(const RunConfig& c) {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = c.command;
  j["config"] = config_json(c);
  return j;
}

TriMesh build_mesh(const RunConfig& c) {
  if (!c.input.empty()) return load_mesh(c.input);
  auto res_or = [&](int d) { return c.res > 0 ? c.res : d; };
  if (c.gen == "sphere") return icosphere(c.subdiv);
  if (c.gen == "torus") return torus(c.major, c.minor, res_or(64), res_or(64));
  if (c.gen == "clifford-r4") return clifford_r4(res_or(64), res_or(64));
  if (c.gen == "clifford-stereo") return clifford_stereo(res_or(64), res_or(64));
  if (c.gen == "perturbed-clifford") return perturbed_clifford(res_or(64), res_or(64), c.amplitude);
  if (c.gen == "necked") {
    NeckedSpheresSpec s;
    s.genus = c.genus;
    s.gap = c.gap;
    s.neck_radius = c.neck_radius;
    s.azimuth = res_or(s.azimuth);
    s.sphere_subdivisions = c.subdiv;
    return necked_spheres(s);
  }
  throw ValidationError("unknown generator: " + c.gen);
}

LiouvilleOptions liouville_options(const RunConfig& c) {
  LiouvilleOptions o;
  o.cg_tolerance = c.tol.at("cg_tolerance");
  o.residual_tolerance = c.tol.at("residual_tolerance");
  o.max_newton_iterations = static_cast<int>(c.tol.at("max_newton_iterations"));
  return o;
}

std::filesystem::path out_dir(const RunConfig& c) {
  std::filesystem::path p(c.out);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw ValidationError("cannot create output directory " + c.out);
  return p;
}

void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + p.string());
  f << s;
}

void write_json(const std::filesystem::path& p, const ordered_json& j) { write_text(p, j.dump(2) + "\n"); }

ordered_json membership_json(double willmore, int genus, const RunConfig& c) {
  if (genus < 1) return nullptr;
  EnergyThresholds t = omega_constant(c.n, genus, c.beta);
  ordered_json j;
  j["n"] = c.n;
  j["p"] = genus;
  j["beta_tilde"] = num(t.beta_tilde);
  j["omega"] = num(t.omega);
  j["delta"] = c.delta;
  j["member"] = class_membership(willmore, t, c.delta);
  return j;
}

int cmd_analyze(const RunConfig& c, std::ostream& out) {
  TriMesh m = build_mesh(c);
  CurvatureBundle b = curvature_bundle(m);
  double id_res = willmore_identity_residual(m, b);

  // Li-Yau: density limits at evenly spaced vertices.
  const int samples = std::min(20, m.num_vertices());
  const double h = m.mean_edge_length();
  std::vector<double> radii{6.0 * h, 3.0 * h};
  ordered_json pts = ordered_json::array();
  double max_limit = 0.0;
  int violations = 0, under = 0;
  const double bound = b.willmore / (4.0 * kPi);
  for (int k = 0; k < samples; ++k) {
    int v = static_cast<int>(static_cast<long long>(k) * m.num_vertices() / samples);
    DensityReport d = density_report(m, m.position(v), radii);
    max_limit = std::max(max_limit, d.limit_estimate);
    if (d.limit_estimate > bound + c.tol.at("li_yau_margin")) ++violations;
    if (d.under_resolved) ++under;
    pts.push_back({{"vertex", v}, {"ratios", d.ratios}, {"limit", num(d.limit_estimate)},
                   {"under_resolved", d.under_resolved}});
  }

  ordered_json r = report_header(c);
  ordered_json res;
  res["ambient_dim"] = m.ambient_dim();
  res["vertices"] = m.num_vertices();
  res["faces"] = m.num_faces();
  res["euler_characteristic"] = m.euler_characteristic();
  res["genus"] = m.genus();
  res["willmore"] = num(b.willmore);
  res["willmore_over_4pi"] = num(bound);
  res["tracefree_energy"] = num(b.tracefree_energy);
  res["total_area"] = num(b.total_area);
  res["gauss_bonnet_residual"] = num(b.gauss_bonnet_residual);
  res["energy_identity_residual"] = num(energy_identity_residual(b));
  res["willmore_identity_residual"] = num(id_res);
  res["li_yau"] = {{"bound", num(bound)},
                   {"radii", radii},
                   {"max_limit", num(max_limit)},
                   {"violations", violations},
                   {"under_resolved", under},
                   {"points", pts}};
  res["membership"] = membership_json(b.willmore, m.genus(), c);
  r["result"] = res;
  write_json(out_dir(c) / "analyze.json", r);
  out << "W = " << format_double(b.willmore) << "  E = " << format_double(b.tracefree_energy)
      << "  genus = " << m.genus() << "\n";
  return kOk;
}

ordered_json map_json(const MobiusMap& map, int dim) {
  ordered_json a = ordered_json::array();
  for (const auto& s : map.steps)
    std::visit(
        [&](const auto& st) {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, Translate>)
            a.push_back({{"translate", vec(st.offset, dim)}});
          else if constexpr (std::is_same_v<T, Dilate>)
            a.push_back({{"dilate", num(st.factor)}});
          else
            a.push_back({{"invert", vec(st.center, dim)}});
        },
        s);
  return a;
}

int cmd_normalize(const RunConfig& c, std::ostream& out) {
  TriMesh m = build_mesh(c);
  CurvatureBundle b = curvature_bundle(m);
  NormalizeOptions o;
  o.umbilic_fraction = c.tol.at("umbilic_fraction");
  o.ball_tolerance = c.tol.at("ball_tolerance");
  NormalizationResult n = normalize(m, b, o);
  const auto& ct = n.certificate;
  const int dim = m.ambient_dim();
  ordered_json r = report_header(c);
  r["result"] = {{"map", map_json(ct.map, dim)},
                 {"lambda", num(ct.lambda)},
                 {"x0", vec(ct.x0, dim)},
                 {"empty_center", vec(ct.empty_center, dim)},
                 {"enclosing_radius", num(ct.enclosing_radius)},
                 {"rho0", num(ct.rho0)},
                 {"max_ball_energy", num(ct.max_ball_energy)},
                 {"tracefree_energy", num(ct.tracefree_energy)},
                 {"input_tracefree_energy", num(ct.input_tracefree_energy)},
                 {"umbilic", ct.umbilic},
                 {"satisfied", ct.satisfied},
                 {"mesh", "normalized.obj"}};
  auto dir = out_dir(c);
  save_mesh((dir / "normalized.obj").string(), n.mesh);
  write_json(dir / "normalize.json", r);
  out << "enclosing radius = " << format_double(ct.enclosing_radius)
      << "  max ball energy = " << format_double(ct.max_ball_energy)
      << "  satisfied = " << (ct.satisfied ? "true" : "false") << "\n";
  if (!ct.satisfied) throw SolverError("normalization certificate not satisfied");
  return kOk;
}

ordered_json uniformization_json(const UniformizationResult& u) {
  return {{"genus", u.genus},
          {"curvature_g0", num(u.curvature_g0)},
          {"residual_inf", num(u.residual_inf)},
          {"osc_u", num(u.osc_u)},
          {"max_abs_u", num(u.max_abs_u)},
          {"area_g", num(u.area_g)},
          {"area_g0", num(u.area_g0)},
          {"iterations", u.iterations}};
}

int cmd_uniformize(const RunConfig& c, std::ostream& out) {
  TriMesh m = build_mesh(c);
  CurvatureBundle b = curvature_bundle(m);
  UniformizationResult u = solve_liouville(m, b, liouville_options(c));
  ordered_json r = report_header(c);
  ordered_json res = uniformization_json(u);
  res["conformal_factor"] = "conformal_factor.csv";
  r["result"] = res;
  std::ostringstream csv;
  csv << "vertex_id,u\n";
  for (std::size_t i = 0; i < u.u.size(); ++i) csv << i << ',' << format_double(u.u[i]) << '\n';
  auto dir = out_dir(c);
  write_text(dir / "conformal_factor.csv", csv.str());
  write_json(dir / "uniformize.json", r);
  out << "max|u| = " << format_double(u.max_abs_u) << "  residual = " << format_double(u.residual_inf)
      << "\n";
  return kOk;
}

int cmd_modulus(const RunConfig& c, std::ostream& out) {
  TriMesh m = build_mesh(c);
  CurvatureBundle b = curvature_bundle(m);
  UniformizationResult u = solve_liouville(m, b, liouville_options(c));
  TorusModulus t = torus_modulus(m, u);
  ordered_json r = report_header(c);
  r["result"] = {{"a", num(t.a)},
                 {"b", num(t.b)},
                 {"raw_re", num(t.raw_re)},
                 {"raw_im", num(t.raw_im)},
                 {"dirichlet", {{num(t.dirichlet[0][0]), num(t.dirichlet[0][1])},
                                {num(t.dirichlet[1][0]), num(t.dirichlet[1][1])}}},
                 {"systole", num(t.systole)},
                 {"uniformization", uniformization_json(u)}};
  write_json(out_dir(c) / "modulus.json", r);
  out << "tau = " << format_double(t.a) << " + i " << format_double(t.b) << "\n";
  return kOk;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  std::vector<std::pair<std::string, TriMesh>> family;
  if (c.family == "necked") {
    if (c.gaps.empty()) throw ValidationError("--gaps must not be empty");
    for (double g : c.gaps) {
      NeckedSpheresSpec s;
      s.genus = c.genus;
      s.gap = g;
      s.neck_radius = c.neck_ratio * g;
      if (c.res > 0) s.azimuth = c.res;
      s.sphere_subdivisions = c.subdiv;
      family.emplace_back("necked_gap_" + format_double(g), necked_spheres(s));
    }
  } else if (c.family == "tori") {
    if (c.ratios.empty()) throw ValidationError("--ratios must not be empty");
    const int res = c.res > 0 ? c.res : 64;
    for (double q : c.ratios)
      family.emplace_back("torus_ratio_" + format_double(q), torus(q, 1.0, res, res));
  } else {
    throw ValidationError("unknown family: " + c.family);
  }
  SweepOptions o;
  o.n = c.n;
  o.delta = c.delta;
  o.beta_table = c.beta;
  o.degeneration_b = c.degeneration_b;
  SweepTable t = compactness_sweep(family, o);

  std::vector<double> w, u, b;
  for (const auto& row : t.rows) {
    w.push_back(row.willmore);
    u.push_back(row.max_abs_u);
    b.push_back(row.b);
  }
  ordered_json r = report_header(c);
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows)
    rows.push_back({{"mesh_id", row.mesh_id},
                    {"W", num(row.willmore)},
                    {"E", num(row.tracefree_energy)},
                    {"member", row.member},
                    {"a", num(row.a)},
                    {"b", num(row.b)},
                    {"systole", num(row.systole)},
                    {"max_abs_u", num(row.max_abs_u)}});
  r["result"] = {{"rows", rows},
                 {"table", "sweep.csv"},
                 {"increasing", {{"W", strictly_increasing(w)},
                                 {"max_abs_u", strictly_increasing(u)},
                                 {"b", strictly_increasing(b)}}},
                 {"degenerate_members", t.degenerate_members}};
  auto dir = out_dir(c);
  write_text(dir / "sweep.csv", sweep_csv(t));
  write_json(dir / "sweep.json", r);
  out << t.rows.size() << " rows written\n";
  if (!t.degenerate_members.empty()) throw SolverError("degenerating members inside the energy class");
  return kOk;
}

int cmd_gausscheck(const RunConfig& c, std::ostream& out) {
  TriMesh m = build_mesh(c);
  bool embedded = false;
  if (m.ambient_dim() == 3) {
    m = embed_in_r4(m);
    embedded = true;
  }
  GaussSplit g = grassmann_split(m);
  PullbackAreaCheck pc = pullback_area_check(m, g);
  CurvatureBundle b = curvature_bundle(m);
  DegreeReport d = degree(g, b);
  HoffmanOssermanReport ho = hoffman_osserman_jacobian(m, g, c.tol.at("h_threshold"));

  double r_excess = -std::numeric_limits<double>::infinity();
  for (int f = 0; f < m.num_faces(); ++f)
    r_excess = std::max(r_excess, std::abs(g.normal_curvature[f]) - 0.5 * g.ao_sq_face[f]);
  double ho_split = 0.0, ho_fd = 0.0, ho_norm = 0.0;
  for (const auto& j : ho.values) {
    ho_split += std::abs(j.formula - j.split);
    ho_fd += std::abs(j.formula - j.split_fd);
    ho_norm += j.formula;
  }
  if (ho_norm > 0.0) {
    ho_split /= ho_norm;
    ho_fd /= ho_norm;
  }

  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> nd;
  auto unit = [&] {
    Vec3 x(nd(rng), nd(rng), nd(rng));
    return x.normalized();
  };
  double xi_max = 0.0;
  int xi_done = 0;
  while (xi_done < c.xi_samples) {
    Vec3 p = unit(), q = unit();
    if ((p - q).norm() < 1e-2) continue;
    xi_max = std::max(xi_max, xi_exactness_check(p, q, c.xi_step));
    ++xi_done;
  }

  std::ostringstream csv;
  csv << "face_id,phi_plus_1,phi_plus_2,phi_plus_3,phi_minus_1,phi_minus_2,phi_minus_3,K,R,"
         "residual_plus,residual_minus\n";
  for (int f = 0; f < m.num_faces(); ++f) {
    csv << f;
    for (int i = 0; i < 3; ++i) csv << ',' << format_double(g.phi_plus[f][i]);
    for (int i = 0; i < 3; ++i) csv << ',' << format_double(g.phi_minus[f][i]);
    csv << ',' << format_double(g.gauss_face[f]) << ',' << format_double(g.normal_curvature[f]) << ','
        << format_double(pc.spherical_plus[f] - pc.predicted_plus[f]) << ','
        << format_double(pc.spherical_minus[f] - pc.predicted_minus[f]) << '\n';
  }

  ordered_json r = report_header(c);
  r["result"] = {
      {"embedded_from_r3", embedded},
      {"faces", m.num_faces()},
      {"pullback_relative_l1", {{"plus", num(pc.relative_l1_plus)}, {"minus", num(pc.relative_l1_minus)}}},
      {"degree",
       {{"plus", d.plus},
        {"minus", d.minus},
        {"raw_plus", num(d.raw_plus)},
        {"raw_minus", num(d.raw_minus)},
        {"inconclusive", d.rounding_error_plus > c.tol.at("degree_tolerance") ||
                             d.rounding_error_minus > c.tol.at("degree_tolerance")}}},
      {"normal_curvature_bound_excess", num(r_excess)},
      {"hoffman_osserman",
       {{"evaluated", ho.values.size()},
        {"skipped", ho.skipped},
        {"relative_l1_split", num(ho_split)},
        {"relative_l1_finite_difference", num(ho_fd)}}},
      {"xi_exactness", {{"samples", xi_done}, {"step", c.xi_step}, {"max_error", num(xi_max)}}},
      {"face_table", "gausscheck_faces.csv"}};
  auto dir = out_dir(c);
  write_text(dir / "gausscheck_faces.csv", csv.str());
  write_json(dir / "gausscheck.json", r);
  out << "pullback residual +" << format_double(pc.relative_l1_plus) << " -"
      << format_double(pc.relative_l1_minus) << "  degrees (" << d.plus << ", " << d.minus << ")\n";
  return kOk;
}

void add_input_options(CLI::App* s, RunConfig& c) {
  auto* gen = s->add_option("--gen", c.gen,
                            "Generator: sphere, torus, clifford-r4, clifford-stereo, "
                            "perturbed-clifford, necked");
  auto* in = s->add_option("--input", c.input, "Mesh file (.obj or .json)");
  gen->excludes(in);
  s->add_option("--res", c.res, "Grid resolution (necked: samples around a neck)");
  s->add_option("--subdiv", c.subdiv, "Icosphere subdivisions");
  s->add_option("--major", c.major, "Torus major radius");
  s->add_option("--minor", c.minor, "Torus minor radius");
  s->add_option("--amplitude", c.amplitude, "Perturbed Clifford amplitude");
  s->add_option("--genus", c.genus, "Necked spheres genus");
  s->add_option("--gap", c.gap, "Necked spheres gap");
  s->add_option("--neck-radius", c.neck_radius, "Necked spheres waist radius");
}

void add_common_options(CLI::App* s, RunConfig& c) {
  s->add_option("--n", c.n, "Ambient dimension of the energy class (3 or 4)");
  s->add_option("--delta", c.delta, "Energy margin below omega");
  s->add_option("--beta", c.beta_args, "GENUS=VALUE, repeatable");
  s->add_option("--out", c.out, "Output directory");
  s->add_option("--tol", c.tol_args, "NAME=VALUE, repeatable");
  s->add_option("--threads", c.threads, "Worker threads");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Willmore energy laboratory", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {{"analyze", "Energies, Gauss-Bonnet and Li-Yau report"},
                      {"normalize", "Moebius normalization with certificate"},
                      {"uniformize", "Constant curvature conformal factor"},
                      {"modulus", "Conformal modulus of a torus"},
                      {"sweep", "Compactness sweep over a parametric family"},
                      {"gausscheck", "Split Gauss map identities in R^4"}};
  for (const auto& sb : subs) {
    CLI::App* s = app.add_subcommand(sb.name, sb.help);
    add_common_options(s, c);
    if (std::string(sb.name) == "sweep") {
      s->add_option("--family", c.family, "necked or tori");
      s->add_option("--p", c.genus, "Genus of the necked family");
      s->add_option("--gaps", c.gaps, "Necked gaps")->delimiter(',');
      s->add_option("--ratios", c.ratios, "Torus major radii (minor 1)")->delimiter(',');
      s->add_option("--neck-ratio", c.neck_ratio, "Neck radius over gap");
      s->add_option("--res", c.res, "Resolution");
      s->add_option("--subdiv", c.subdiv, "Sheet subdivisions (genus >= 2)");
      s->add_option("--degeneration-b", c.degeneration_b, "Members must have b below this");
    } else {
      add_input_options(s, c);
    }
    if (std::string(sb.name) == "gausscheck") {
      s->add_option("--xi-samples", c.xi_samples, "Random (p, q) pairs");
      s->add_option("--xi-step", c.xi_step, "Difference step");
      s->add_option("--seed", c.seed, "Sampling seed");
    }
    s->callback([&c, s] { c.command = s->get_name(); });
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationFailure;
  }

  try {
    resolve(c);
    set_thread_count(c.threads);
    if (c.command == "analyze") return cmd_analyze(c, out);
    if (c.command == "normalize") return cmd_normalize(c, out);
    if (c.command == "uniformize") return cmd_uniformize(c, out);
    if (c.command == "modulus") return cmd_modulus(c, out);
    if (c.command == "sweep") return cmd_sweep(c, out);
    if (c.command == "gausscheck") return cmd_gausscheck(c, out);
    throw ValidationError("unknown command");
  } catch (const ValidationError& e) {
    err << "validation failure: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }
}

}  // namespace willmore::cli
