#include "ngeo/scenario_file.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

namespace ngeo {

using nlohmann::json;

double Polynomial::operator()(const Vector& x) const {
  double s = 0.0;
  for (const Term& t : terms) {
    double v = t.coef;
    for (int k = 0; k < nvars; ++k) v *= std::pow(x[k], t.powers[k]);
    s += v;
  }
  return s;
}

Vector Polynomial::gradient(const Vector& x) const {
  Vector g = Vector::Zero(nvars);
  for (const Term& t : terms) {
    for (int k = 0; k < nvars; ++k) {
      if (t.powers[k] == 0) continue;
      double v = t.coef * t.powers[k] * std::pow(x[k], t.powers[k] - 1);
      for (int l = 0; l < nvars; ++l)
        if (l != k) v *= std::pow(x[l], t.powers[l]);
      g[k] += v;
    }
  }
  return g;
}

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ParseError(where + ": unknown key '" + key + "'");
  }
}

const json& require(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<int>();
}

Vector vector_of(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ParseError(where + ": expected an array of " + std::to_string(n) + " numbers");
  }
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = number(j[i], where);
  return v;
}

MetricField polynomial_metric(const json& j, int d, const Box& chart) {
  check_keys(j, {"g0", "delta", "beta"}, "metric");
  const json& jg = require(j, "g0", "metric");
  if (!jg.is_array() || static_cast<int>(jg.size()) != d) throw ParseError("metric.g0: expected d rows");
  std::vector<Polynomial> g(d * d);
  for (int r = 0; r < d; ++r) {
    if (!jg[r].is_array() || static_cast<int>(jg[r].size()) != d) throw ParseError("metric.g0: expected d columns");
    for (int c = 0; c < d; ++c) {
      g[r * d + c] = parse_polynomial(jg[r][c], d, "metric.g0[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  const json& jd = require(j, "delta", "metric");
  if (!jd.is_array() || static_cast<int>(jd.size()) != d) throw ParseError("metric.delta: expected d entries");
  std::vector<Polynomial> delta(d);
  for (int i = 0; i < d; ++i) delta[i] = parse_polynomial(jd[i], d, "metric.delta[" + std::to_string(i) + "]");
  const Polynomial beta = parse_polynomial(require(j, "beta", "metric"), d, "metric.beta");

  MetricField m;
  m.dim = d;
  m.chart = chart;
  m.g0 = [g, d](const Vector& x) {
    Matrix G(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) G(r, c) = g[r * d + c](x);
    return G;
  };
  m.d_g0 = [g, d](const Vector& x) {
    std::vector<Matrix> out(d, Matrix(d, d));
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        const Vector gr = g[r * d + c].gradient(x);
        for (int k = 0; k < d; ++k) out[k](r, c) = gr[k];
      }
    return out;
  };
  m.delta = [delta, d](const Vector& x) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = delta[i](x);
    return v;
  };
  m.d_delta = [delta, d](const Vector& x) {
    Matrix D(d, d);
    for (int i = 0; i < d; ++i) D.row(i) = delta[i].gradient(x).transpose();
    return D;
  };
  m.beta = [beta](const Vector& x) { return beta(x); };
  m.d_beta = [beta](const Vector& x) { return beta.gradient(x); };
  return m;
}

Submanifold parse_shape(const json& j, int d, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  const std::string type = require(j, "type", where).get<std::string>();
  Submanifold s;
  if (type == "point") {
    check_keys(j, {"type", "x", "t", "label"}, where);
    s = make_point({vector_of(require(j, "x", where), d, where + ".x"), number(require(j, "t", where), where + ".t")});
  } else if (type == "sphere") {
    check_keys(j, {"type", "center", "radius", "t", "label"}, where);
    s = make_sphere(vector_of(require(j, "center", where), d, where + ".center"),
                    number(require(j, "radius", where), where + ".radius"), number(require(j, "t", where), where + ".t"));
  } else if (type == "cylinder") {
    check_keys(j, {"type", "center", "radius", "label"}, where);
    s = make_cylinder(vector_of(require(j, "center", where), d, where + ".center"),
                      number(require(j, "radius", where), where + ".radius"));
  } else if (type == "plane") {
    check_keys(j, {"type", "normal", "offset", "label"}, where);
    s = make_plane(vector_of(require(j, "normal", where), d + 1, where + ".normal"),
                   number(require(j, "offset", where), where + ".offset"));
  } else if (type == "polynomial") {
    check_keys(j, {"type", "constraints", "cylindrical", "compact", "hint", "label"}, where);
    const json& jc = require(j, "constraints", where);
    if (!jc.is_array() || jc.empty()) throw ParseError(where + ".constraints: expected a nonempty array");
    std::vector<Polynomial> phi;
    for (std::size_t i = 0; i < jc.size(); ++i) {
      phi.push_back(parse_polynomial(jc[i], d + 1, where + ".constraints[" + std::to_string(i) + "]"));
    }
    const int k = static_cast<int>(phi.size());
    if (k > d + 1) throw ParseError(where + ": more constraints than coordinates");
    s = Submanifold(
        d + 1, k,
        [phi, k](const Vector& z) {
          Vector v(k);
          for (int i = 0; i < k; ++i) v[i] = phi[i](z);
          return v;
        },
        [phi, k, d](const Vector& z) {
          Matrix J(k, d + 1);
          for (int i = 0; i < k; ++i) J.row(i) = phi[i].gradient(z).transpose();
          return J;
        });
    if (j.contains("cylindrical")) s.cylindrical = j.at("cylindrical").get<bool>();
    if (j.contains("compact")) s.compact = j.at("compact").get<bool>();
    if (j.contains("hint")) s.hint = vector_of(j.at("hint"), d + 1, where + ".hint");
  } else {
    throw ParseError(where + ": unknown shape type '" + type + "'");
  }
  s.label = j.contains("label") ? j.at("label").get<std::string>() : where;
  return s;
}

void parse_solver(const json& j, SolveParams& p) {
  check_keys(j, {"segments", "max_iters", "grad_tol", "penalty_schedule", "restarts", "restart_noise", "parallel",
                 "step", "tol"},
             "solver");
  if (j.contains("segments")) p.N = integer(j.at("segments"), "solver.segments");
  if (j.contains("max_iters")) p.max_iters = integer(j.at("max_iters"), "solver.max_iters");
  if (j.contains("grad_tol")) p.grad_tol = number(j.at("grad_tol"), "solver.grad_tol");
  if (j.contains("restarts")) p.restarts = integer(j.at("restarts"), "solver.restarts");
  if (j.contains("restart_noise")) p.restart_noise = number(j.at("restart_noise"), "solver.restart_noise");
  if (j.contains("parallel")) p.parallel = j.at("parallel").get<bool>();
  if (j.contains("penalty_schedule")) {
    const json& s = j.at("penalty_schedule");
    if (!s.is_array()) throw ParseError("solver.penalty_schedule: expected an array");
    p.penalty_schedule.clear();
    for (const auto& v : s) p.penalty_schedule.push_back(number(v, "solver.penalty_schedule"));
  }
  if (j.contains("step")) {
    const json& s = j.at("step");
    check_keys(s, {"initial_step", "shrink", "sufficient_decrease", "max_backtracks"}, "solver.step");
    if (s.contains("initial_step")) p.step.initial_step = number(s.at("initial_step"), "solver.step.initial_step");
    if (s.contains("shrink")) p.step.shrink = number(s.at("shrink"), "solver.step.shrink");
    if (s.contains("sufficient_decrease")) {
      p.step.sufficient_decrease = number(s.at("sufficient_decrease"), "solver.step.sufficient_decrease");
    }
    if (s.contains("max_backtracks")) p.step.max_backtracks = integer(s.at("max_backtracks"), "solver.step.max_backtracks");
  }
  if (j.contains("tol")) {
    const json& t = j.at("tol");
    check_keys(t, {"geo", "cons", "orth", "on", "causal"}, "solver.tol");
    if (t.contains("geo")) p.tol.geo = number(t.at("geo"), "solver.tol.geo");
    if (t.contains("cons")) p.tol.cons = number(t.at("cons"), "solver.tol.cons");
    if (t.contains("orth")) p.tol.orth = number(t.at("orth"), "solver.tol.orth");
    if (t.contains("on")) p.tol.on = number(t.at("on"), "solver.tol.on");
    if (t.contains("causal")) p.tol.causal = number(t.at("causal"), "solver.tol.causal");
  }
}

}  // namespace

Polynomial parse_polynomial(const json& j, int nvars, const std::string& where) {
  Polynomial p;
  p.nvars = nvars;
  if (j.is_number()) {
    p.terms.push_back({j.get<double>(), std::vector<int>(nvars, 0)});
    return p;
  }
  if (!j.is_array()) throw ParseError(where + ": expected a number or an array of terms");
  for (const auto& t : j) {
    check_keys(t, {"coef", "powers"}, where);
    Polynomial::Term term;
    term.coef = number(require(t, "coef", where), where + ".coef");
    const json& pw = require(t, "powers", where);
    if (!pw.is_array() || static_cast<int>(pw.size()) != nvars) {
      throw ParseError(where + ".powers: expected " + std::to_string(nvars) + " exponents");
    }
    for (const auto& e : pw) {
      const int k = integer(e, where + ".powers");
      if (k < 0) throw ParseError(where + ".powers: exponents must be nonnegative");
      term.powers.push_back(k);
    }
    p.terms.push_back(std::move(term));
  }
  return p;
}

ScenarioFile parse_scenario(const json& j, const std::string& fallback_name) {
  try {
    check_keys(j, {"name", "description", "dimension", "chart", "metric", "P", "Q", "hypothesis", "lift_t0",
                   "time_window", "D_Q_bound", "solver", "seed"},
               "scenario");
    ScenarioFile f;
    Scenario& s = f.scenario;
    s.name = j.contains("name") ? j.at("name").get<std::string>() : fallback_name;
    s.pair = "custom";
    if (j.contains("description")) s.description = j.at("description").get<std::string>();

    const json& jm = require(j, "metric", "scenario");
    if (jm.is_object() && jm.contains("builtin")) {
      check_keys(jm, {"builtin"}, "metric");
      s.metric = builtin_metric(jm.at("builtin").get<std::string>());
    }
    const int d = j.contains("dimension") ? integer(j.at("dimension"), "dimension") : s.metric.dim;
    if (d < 1) throw ParseError("dimension: must be at least 1");
    if (s.metric.dim != 0 && s.metric.dim != d) throw ParseError("dimension does not match the builtin metric");
    if (j.contains("chart")) {
      const json& jc = j.at("chart");
      check_keys(jc, {"lower", "upper"}, "chart");
      Box b{vector_of(require(jc, "lower", "chart"), d, "chart.lower"),
            vector_of(require(jc, "upper", "chart"), d, "chart.upper")};
      if (!(b.lower.array() < b.upper.array()).all()) throw ParseError("chart: lower must be below upper");
      s.metric.chart = b;
    } else if (s.metric.dim == 0) {
      throw ParseError("scenario: missing key 'chart'");
    }
    if (s.metric.dim == 0) s.metric = polynomial_metric(jm, d, s.metric.chart);
    s.metric.validate(10);

    if (j.contains("time_window")) s.time_window = number(j.at("time_window"), "time_window");
    const bool hasP = j.contains("P"), hasQ = j.contains("Q");
    if (hasP != hasQ) throw ParseError("scenario: P and Q must be given together");
    if (hasP) {
      f.has_boundary = true;
      s.boundary.P = parse_shape(j.at("P"), d, "P");
      s.boundary.Q = parse_shape(j.at("Q"), d, "Q");
      const std::string h = j.contains("hypothesis") ? j.at("hypothesis").get<std::string>() : "H1";
      if (h == "H1") {
        s.boundary.hypothesis = Hypothesis::H1;
      } else if (h == "H2") {
        s.boundary.hypothesis = Hypothesis::H2;
      } else {
        throw ParseError("hypothesis: expected \"H1\" or \"H2\"");
      }
      if (j.contains("lift_t0")) s.boundary.lift_t0 = number(j.at("lift_t0"), "lift_t0");
      if (j.contains("D_Q_bound")) s.boundary.D_Q_bound = number(j.at("D_Q_bound"), "D_Q_bound");
    }
    if (j.contains("solver")) parse_solver(j.at("solver"), f.params);
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned()) throw ParseError("seed: expected a nonnegative integer");
      f.params.seed = j.at("seed").get<std::uint64_t>();
    }
    f.params.validate();
    return f;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed scenario: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  } catch (const ModelError& e) {
    throw ParseError(std::string("invalid metric: ") + e.what());
  } catch (const UnknownScenario& e) {
    throw ParseError(e.what());
  }
}

ScenarioFile load_scenario(const std::string& source) {
  const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) {
    const std::string rest = source.substr(prefix.size());
    const auto colon = rest.find(':');
    const std::string name = rest.substr(0, colon);
    const std::string pair = colon == std::string::npos ? "point-point" : rest.substr(colon + 1);
    try {
      ScenarioFile f;
      f.scenario = builtin(name, pair);
      f.has_boundary = true;
      return f;
    } catch (const UnknownScenario& e) {
      throw ParseError(e.what());
    }
  }
  std::ifstream in(source);
  if (!in) throw ParseError("cannot open scenario file '" + source + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_scenario(j, std::filesystem::path(source).stem().string());
}

}  // namespace ngeo
