// ngeo: normal geodesics, Fermat metrics and horizontal lifts from the command line.
//
// Exit codes: 0 success, 1 solver found nothing certifiable (best attempt is
// still written), 2 parse or validation error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ngeo/curve_io.hpp"
#include "ngeo/fermat.hpp"
#include "ngeo/report.hpp"
#include "ngeo/scenario_file.hpp"
#include "ngeo/solver.hpp"
#include "ngeo/submersion.hpp"

namespace fs = std::filesystem;
using namespace ngeo;

namespace {

constexpr int kOk = 0;
constexpr int kNotFound = 1;
constexpr int kInvalid = 2;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<int> segments;
  std::optional<std::string> out_dir;
  std::optional<double> tol_geo, tol_cons, tol_orth, tol_on, tol_causal;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Random seed for restarts");
    cmd->add_option("--restarts", restarts, "Number of restarts");
    cmd->add_option("--segments", segments, "Segment count N");
    cmd->add_option("--out-dir", out_dir, "Output directory (default $NGEO_OUT_DIR or .)");
    cmd->add_option("--tol-geo", tol_geo, "Geodesic residual tolerance");
    cmd->add_option("--tol-cons", tol_cons, "Conservation tolerance");
    cmd->add_option("--tol-orth", tol_orth, "Orthogonality tolerance");
    cmd->add_option("--tol-on", tol_on, "Endpoint constraint tolerance");
    cmd->add_option("--tol-causal", tol_causal, "Causal classification tolerance");
  }

  void apply(SolveParams& p) const {
    if (seed) p.seed = *seed;
    if (restarts) p.restarts = *restarts;
    if (segments) p.N = *segments;
    if (tol_geo) p.tol.geo = *tol_geo;
    if (tol_cons) p.tol.cons = *tol_cons;
    if (tol_orth) p.tol.orth = *tol_orth;
    if (tol_on) p.tol.on = *tol_on;
    if (tol_causal) p.tol.causal = *tol_causal;
    p.validate();
  }

  fs::path directory() const {
    if (out_dir) return *out_dir;
    if (const char* env = std::getenv("NGEO_OUT_DIR"); env && *env) return env;
    return ".";
  }
};

std::string stem_of(const Scenario& s) { return s.pair == "custom" ? s.name : s.name + "-" + s.pair; }

fs::path prepare(const Overrides& o) {
  const fs::path dir = o.directory();
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

Vector parse_point(const std::string& text, int d) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      v.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ParseError("bad coordinate list '" + text + "'");
    }
  }
  if (static_cast<int>(v.size()) != d) {
    throw ParseError("point '" + text + "' needs " + std::to_string(d) + " coordinates");
  }
  return Eigen::Map<Vector>(v.data(), d);
}

SpatialCurve segment(const Vector& p, const Vector& q, int N) {
  SpatialCurve x;
  x.nodes.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double s = static_cast<double>(i) / N;
    x.nodes[i] = (1 - s) * p + s * q;
  }
  return x;
}

// --curve file, or the straight segment --from -> --to.
SpatialCurve spatial_input(const std::string& curve, const std::string& from, const std::string& to, int d, int N) {
  if (!curve.empty()) {
    SpatialCurve x = spatial_part(read_curve(curve));
    if (x.dim() != d) throw ParseError("curve dimension does not match the scenario");
    return x;
  }
  if (from.empty() || to.empty()) throw ParseError("give --curve or both --from and --to");
  return segment(parse_point(from, d), parse_point(to, d), N);
}

Side parse_side(const std::string& s) {
  if (s == "future") return Side::Future;
  if (s == "past") return Side::Past;
  throw ParseError("side must be 'future' or 'past'");
}

std::vector<double> null_column(const MetricField& m, const SpacetimeCurve& c) {
  const std::vector<double> e = segment_energies(m, c);
  std::vector<double> col(e);
  col.push_back(e.back());
  return col;
}

int cmd_solve(const std::string& source, const Overrides& o, int refine_factor) {
  ScenarioFile f = load_scenario(source);
  if (!f.has_boundary) throw ParseError("scenario declares no P and Q");
  o.apply(f.params);
  const Scenario& s = f.scenario;

  SolveResult result;
  std::string status = "converged";
  int code = kOk;
  try {
    result = solve_normal_geodesic(s.metric, s.boundary, f.params, sampler_for(s));
    if (refine_factor > 1) result = refine(s.metric, s.boundary, result, refine_factor, f.params);
  } catch (const SolveNotFound& e) {
    std::cerr << "ngeo: " << e.what() << '\n';
    result = e.best;
    status = "not-found";
    code = kNotFound;
    if (result.curve.nodes.empty()) return code;
  }

  Report r;
  r.add("scenario", s.name);
  r.add("pair", s.pair);
  r.add("hypothesis", to_string(s.boundary.hypothesis));
  r.add("branch", to_string(result.branch));
  r.add("status", status);
  r.add("converged", result.converged ? "yes" : "no");
  r.add("seed", std::to_string(f.params.seed));
  r.add("restarts", f.params.restarts);
  r.add("iterations", result.iterations);
  r.add("J_value", result.J_value);
  r.append(diagnostics_report(s.metric, result.curve, result.diagnostics, f.params.tol));
  for (const auto& w : result.warnings) r.add("warning", w);

  const fs::path dir = prepare(o);
  const std::string stem = stem_of(s);
  write_curve((dir / (stem + ".curve.csv")).string(), result.curve);
  write_text(dir / (stem + ".report.txt"), r.str());
  std::cout << r.str();
  return code;
}

int cmd_fermat_length(const std::string& source, const std::string& curve, const std::string& from,
                      const std::string& to, const Overrides& o) {
  ScenarioFile f = load_scenario(source);
  o.apply(f.params);
  const MetricField& m = f.scenario.metric;
  const SpatialCurve x = spatial_input(curve, from, to, m.dim, f.params.N);
  const FermatStructure plus(m, Side::Future), minus(m, Side::Past);
  const StimoCheck st = check_stimo(m, x);
  Report r;
  r.add("length_future", fermat_length(plus, x));
  r.add("length_past", fermat_length(minus, x));
  r.add("T_plus", arrival_time(plus, x));
  r.add("T_minus", arrival_time(minus, x));
  r.add("T_tilde_plus", T_tilde(m, x, Side::Future));
  r.add("T_tilde_minus", T_tilde(m, x, Side::Past));
  r.add("comparison_holds", st.holds ? "yes" : "no");
  r.add("comparison_slack", st.slack);
  std::cout << r.str();
  return kOk;
}

int cmd_fermat_distance(const std::string& source, const std::string& from, const std::string& to,
                        const std::string& side, const Overrides& o) {
  ScenarioFile f = load_scenario(source);
  o.apply(f.params);
  const MetricField& m = f.scenario.metric;
  const Vector p = parse_point(from, m.dim), q = parse_point(to, m.dim);
  const FermatStructure F(m, parse_side(side));
  FermatDistance fwd, bwd;
  try {
    fwd = fermat_distance(F, p, q, f.params);
    bwd = fermat_distance(F, q, p, f.params);
  } catch (const NoEstimate& e) {
    std::cerr << "ngeo: " << e.what() << '\n';
    return kNotFound;
  }
  Report r;
  r.add("side", side);
  r.add("forward", fwd.value);
  r.add("backward", bwd.value);
  r.add("forward_restarts_converged", fwd.restarts_converged);
  r.add("backward_restarts_converged", bwd.restarts_converged);
  const fs::path dir = prepare(o);
  const std::string stem = f.scenario.name + "-fermat-" + side;
  write_curve((dir / (stem + ".forward.csv")).string(), lightlike_lift(F, fwd.curve, 0.0));
  write_curve((dir / (stem + ".backward.csv")).string(), lightlike_lift(F, bwd.curve, 0.0));
  std::cout << r.str();
  return kOk;
}

int cmd_fermat_lift(const std::string& source, const std::string& curve, const std::string& from,
                    const std::string& to, const std::string& side, double t0, const Overrides& o) {
  ScenarioFile f = load_scenario(source);
  o.apply(f.params);
  const MetricField& m = f.scenario.metric;
  const SpatialCurve x = spatial_input(curve, from, to, m.dim, f.params.N);
  const FermatStructure F(m, parse_side(side));
  const SpacetimeCurve c = lightlike_lift(F, x, t0);
  const fs::path dir = prepare(o);
  const fs::path path = dir / (f.scenario.name + ".lightlike-" + side + ".csv");
  write_curve(path.string(), c, "null_check", null_column(m, c));
  Report r;
  r.add("curve", path.string());
  r.add("Delta", delta_z(c));
  r.add("arrival_time", arrival_time(F, x));
  std::cout << r.str();
  return kOk;
}

int cmd_lift(const std::string& source, const std::string& curve, std::optional<double> t0, const Overrides& o) {
  ScenarioFile f = load_scenario(source);
  if (!f.has_boundary) throw ParseError("scenario declares no P and Q");
  o.apply(f.params);
  const Scenario& s = f.scenario;
  if (!s.boundary.P.cylindrical || !s.boundary.Q.cylindrical) {
    throw InvalidScenario("lift needs cylindrical P and Q (hypothesis H2)");
  }
  const BaseMetric bm{s.metric};
  const Submanifold P_S = base_of(s.boundary.P), Q_S = base_of(s.boundary.Q);
  int code = kOk;
  BaseGeodesic g;
  if (!curve.empty()) {
    g = certify_base(bm, spatial_input(curve, "", "", s.metric.dim, f.params.N), P_S, Q_S, f.params.tol);
  } else {
    try {
      g = riemannian_normal_geodesic(bm, P_S, Q_S, f.params);
    } catch (const NoGeodesicFound& e) {
      std::cerr << "ngeo: " << e.what() << '\n';
      g = e.best;
      code = kNotFound;
      if (g.curve.nodes.empty()) return code;
    }
  }
  const SpacetimeCurve c = horizontal_lift(bm, g.curve, t0 ? *t0 : s.boundary.lift_t0);
  const Diagnostics d = certify(s.metric, c, s.boundary, f.params.tol.causal);
  Report r;
  r.add("base_energy", g.energy);
  r.add("base_geodesic_residual", g.geodesic_residual);
  r.add("base_orthogonality_r0", g.orthogonality.r0);
  r.add("base_orthogonality_r1", g.orthogonality.r1);
  r.add("lift_geodesic_residual", lift_is_geodesic_check(s.metric, c));
  r.append(diagnostics_report(s.metric, c, d, f.params.tol));
  const fs::path dir = prepare(o);
  write_curve((dir / (stem_of(s) + ".lift.csv")).string(), c);
  write_text(dir / (stem_of(s) + ".lift.report.txt"), r.str());
  std::cout << r.str();
  return code;
}

int cmd_diagnose(const std::string& curve_path, const std::string& source, const Overrides& o) {
  ScenarioFile f = load_scenario(source);
  if (!f.has_boundary) throw ParseError("scenario declares no P and Q");
  o.apply(f.params);
  const Scenario& s = f.scenario;
  const SpacetimeCurve c = read_curve(curve_path);
  if (c.dim() != s.metric.dim) throw ParseError("curve dimension does not match the scenario");
  const Diagnostics d = certify(s.metric, c, s.boundary, f.params.tol.causal);
  std::cout << diagnostics_report(s.metric, c, d, f.params.tol).str();
  return kOk;
}

int cmd_catalog() {
  for (const auto& name : builtin_names()) {
    for (const auto& pair : builtin_pairs(name)) {
      const Scenario s = builtin(name, pair);
      std::cout << "builtin:" << name << ':' << pair << "  [" << to_string(s.boundary.hypothesis) << "]  "
                << s.description;
      if (s.expected) {
        std::cout << "  expected:";
        if (s.expected->J) std::cout << " J=" << fmt(*s.expected->J);
        if (s.expected->Delta) std::cout << " Delta=" << fmt(*s.expected->Delta);
      }
      std::cout << '\n';
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal geodesics between submanifolds of standard stationary spacetimes"};
  app.require_subcommand(1);

  Overrides o;
  std::string scenario, curve, from, to, side = "future";
  double t0 = 0.0;
  std::optional<double> lift_t0;
  int refine_factor = 1;

  auto* solve = app.add_subcommand("solve", "Solve for a normal geodesic joining P and Q");
  solve->add_option("scenario", scenario, "Scenario file or builtin:<name>[:<pair>]")->required();
  solve->add_option("--refine", refine_factor, "Upsample and re-polish by this factor")->check(CLI::PositiveNumber);
  o.attach(solve);

  auto* fermat = app.add_subcommand("fermat", "Fermat metric tools");
  fermat->require_subcommand(1);
  auto* flen = fermat->add_subcommand("length", "Fermat lengths, arrival times and their J-root bounds");
  auto* fdist = fermat->add_subcommand("distance", "Forward and backward Fermat distance estimates");
  auto* flift = fermat->add_subcommand("lift", "Lightlike lift of a spatial curve");
  for (auto* c : {flen, fdist, flift}) {
    c->add_option("scenario", scenario, "Scenario file or builtin:<name>")->required();
    c->add_option("--from", from, "Start point, comma separated");
    c->add_option("--to", to, "End point, comma separated");
    o.attach(c);
  }
  for (auto* c : {flen, flift}) c->add_option("--curve", curve, "Curve file (its spatial part is used)");
  for (auto* c : {fdist, flift}) c->add_option("--side", side, "future or past")->check(CLI::IsMember({"future", "past"}));
  flift->add_option("--t0", t0, "Initial time");

  auto* lift = app.add_subcommand("lift", "Horizontal lift of the h1 normal geodesic (H2 route)");
  lift->add_option("scenario", scenario, "Scenario file or builtin:<name>:<pair>")->required();
  lift->add_option("--curve", curve, "Lift this base curve instead of solving");
  lift->add_option("--t0", lift_t0, "Initial time of the lift");
  o.attach(lift);

  auto* diagnose = app.add_subcommand("diagnose", "Recompute diagnostics of a stored curve");
  diagnose->add_option("curve", curve, "Curve file")->required();
  diagnose->add_option("scenario", scenario, "Scenario file or builtin:<name>:<pair>")->required();
  o.attach(diagnose);

  auto* catalog = app.add_subcommand("catalog", "List builtin scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (solve->parsed()) return cmd_solve(scenario, o, refine_factor);
    if (flen->parsed()) return cmd_fermat_length(scenario, curve, from, to, o);
    if (fdist->parsed()) {
      if (from.empty() || to.empty()) throw ParseError("distance needs --from and --to");
      return cmd_fermat_distance(scenario, from, to, side, o);
    }
    if (flift->parsed()) return cmd_fermat_lift(scenario, curve, from, to, side, t0, o);
    if (lift->parsed()) return cmd_lift(scenario, curve, lift_t0, o);
    if (diagnose->parsed()) return cmd_diagnose(curve, scenario, o);
    if (catalog->parsed()) return cmd_catalog();
  } catch (const ParseError& e) {
    std::cerr << "ngeo: " << e.what() << '\n';
    return kInvalid;
  } catch (const InvalidScenario& e) {
    std::cerr << "ngeo: invalid scenario: " << e.what() << '\n';
    return kInvalid;
  } catch (const PreconditionError& e) {
    std::cerr << "ngeo: " << e.what() << '\n';
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "ngeo: " << e.what() << '\n';
    return kInvalid;
  } catch (const DegenerateCurve& e) {
    std::cerr << "ngeo: " << e.what() << '\n';
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << "ngeo: " << e.what() << '\n';
    return kNotFound;
  }
  return kInvalid;
}
