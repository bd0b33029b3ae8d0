#include "ngeo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ngeo/descent.hpp"
#include "ngeo/parallel.hpp"
#include "ngeo/submersion.hpp"

namespace ngeo {

void SolveParams::validate() const {
  if (N < 8) throw PreconditionError("segment count must be at least 8");
  if (max_iters < 1) throw PreconditionError("max_iters must be positive");
  if (!(grad_tol > 0)) throw PreconditionError("grad_tol must be positive");
  if (penalty_schedule.empty()) throw PreconditionError("penalty schedule is empty");
  for (std::size_t i = 0; i < penalty_schedule.size(); ++i) {
    if (!(penalty_schedule[i] > 0)) throw PreconditionError("penalty weights must be positive");
    if (i > 0 && !(penalty_schedule[i] > penalty_schedule[i - 1])) {
      throw PreconditionError("penalty weights must be strictly increasing");
    }
  }
  if (restarts < 1) throw PreconditionError("restarts must be at least 1");
  if (!(restart_noise >= 0)) throw PreconditionError("restart noise must be nonnegative");
  if (!(step.shrink > 0 && step.shrink < 1)) throw PreconditionError("step shrink factor must lie in (0, 1)");
  if (!(step.sufficient_decrease > 0 && step.sufficient_decrease < 1)) {
    throw PreconditionError("sufficient-decrease constant must lie in (0, 1)");
  }
  if (!(step.initial_step > 0)) throw PreconditionError("initial step must be positive");
}

Diagnostics certify(const MetricField& m, const SpacetimeCurve& c, const BoundaryPair& bp, double tol_causal) {
  Diagnostics d;
  d.conservation = conservation_record(m, c);
  d.geodesic_residual = geodesic_residual(m, c);
  d.orthogonality = orthogonality_residual_unchecked(m, c, bp);
  d.character = energy_and_character(m, c, tol_causal).character;
  d.violation_P = bp.P.value(stack(c.nodes.front())).norm();
  d.violation_Q = bp.Q.value(stack(c.nodes.back())).norm();
  d.scale = std::max(1.0, gR_energy_scale(m, c));
  return d;
}

bool meets(const Diagnostics& d, const Tolerances& tol) {
  return d.geodesic_residual / d.scale <= tol.geo && d.conservation.max_deviation / d.scale <= tol.cons &&
         d.conservation.E_deviation / d.scale <= tol.cons && d.orthogonality.r0 <= tol.orth &&
         d.orthogonality.r1 <= tol.orth && d.violation_P <= tol.on && d.violation_Q <= tol.on;
}

namespace {

std::vector<int> range(int from, int count) {
  std::vector<int> r(count);
  for (int i = 0; i < count; ++i) r[i] = from + i;
  return r;
}

// Variables: x_0..x_N (d each), then t0 and t1.
struct H1Layout {
  int N;
  int d;
  int t0() const { return (N + 1) * d; }
  int t1() const { return (N + 1) * d + 1; }
  int size() const { return (N + 1) * d + 2; }
  std::vector<int> start() const {
    std::vector<int> r = range(0, d);
    r.push_back(t0());
    return r;
  }
  std::vector<int> end() const {
    std::vector<int> r = range(N * d, d);
    r.push_back(t1());
    return r;
  }
};

Vector pack(const H1Layout& L, const SpatialCurve& x, double t0, double t1) {
  Vector th(L.size());
  for (int i = 0; i <= L.N; ++i) th.segment(i * L.d, L.d) = x.nodes[i];
  th[L.t0()] = t0;
  th[L.t1()] = t1;
  return th;
}

ReducedState unpack(const H1Layout& L, const Vector& th) {
  ReducedState rs;
  rs.x.nodes.resize(L.N + 1);
  for (int i = 0; i <= L.N; ++i) rs.x.nodes[i] = th.segment(i * L.d, L.d);
  rs.t0 = th[L.t0()];
  rs.Delta = th[L.t1()] - th[L.t0()];
  return rs;
}

DescentProblem h1_problem(const MetricField& m, const BoundaryPair& bp, const H1Layout& L) {
  DescentProblem prob;
  prob.objective = [&m, L](const Vector& th, Vector* grad) {
    const ReducedState rs = unpack(L, th);
    if (!grad) return eval_J(m, rs.x, rs.Delta);
    const JGradient g = grad_J(m, rs.x, rs.Delta);
    grad->setZero(L.size());
    for (int i = 0; i <= L.N; ++i) grad->segment(i * L.d, L.d) = g.nodes[i];
    (*grad)[L.t0()] = -g.dDelta;
    (*grad)[L.t1()] = g.dDelta;
    return g.value;
  };
  prob.metric = curve_metric(L.N, L.d, 2);
  prob.ends = {{L.start(), &bp.P}, {L.end(), &bp.Q}};
  return prob;
}

struct Attempt {
  SolveResult result;
  bool optimizer_ok = false;
  double violation = 0.0;
};

Attempt finish_h1(const MetricField& m, const BoundaryPair& bp, const H1Layout& L, const Vector& th,
                  const SolveParams& params, bool optimizer_ok, int iterations) {
  Attempt a;
  const ReducedState rs = unpack(L, th);
  a.result.curve = reconstruct_t(m, rs);
  a.result.J_value = eval_J(m, rs.x, rs.Delta);
  a.result.diagnostics = certify(m, a.result.curve, bp, params.tol.causal);
  a.result.iterations = iterations;
  a.result.branch = Hypothesis::H1;
  a.violation = std::max(a.result.diagnostics.violation_P, a.result.diagnostics.violation_Q);
  a.optimizer_ok = optimizer_ok && a.violation <= params.tol.on;
  a.result.converged = a.optimizer_ok && meets(a.result.diagnostics, params.tol);
  return a;
}

Attempt descend_h1(const MetricField& m, const BoundaryPair& bp, const H1Layout& L, Vector th,
                   const SolveParams& params, bool penalty_phases) {
  const DescentProblem prob = h1_problem(m, bp, L);
  int iterations = 0;
  if (penalty_phases) {
    for (double mu : params.penalty_schedule) {
      iterations += penalty_descent(prob, th, mu, params.max_iters, params.grad_tol, params.step).iterations;
    }
  }
  ProjectionSettings ps;
  ps.tol_on = params.tol.on;
  const DescentStats polish = projected_descent(prob, th, params.max_iters, params.grad_tol, params.step, ps);
  iterations += polish.iterations;
  return finish_h1(m, bp, L, th, params, polish.converged, iterations);
}

Vector hint_of(const Submanifold& s) {
  return s.hint.size() == s.ambient_dim() ? s.hint : Vector::Zero(s.ambient_dim());
}

Vector perturb_onto(const Submanifold& s, const Vector& z, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector p = z;
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] += scale * gauss(rng);
  try {
    return project(s, p);
  } catch (const ProjectionFailed&) {
    return p;
  }
}

// Certified first, then lower J, then lower geodesic residual. Among
// uncertified attempts prefer those whose optimizer finished, then the
// smaller constraint violation.
bool better(const Attempt& a, const Attempt& b) {
  if (a.result.converged != b.result.converged) return a.result.converged;
  if (!a.result.converged && a.optimizer_ok != b.optimizer_ok) return a.optimizer_ok;
  if (!a.result.converged && !a.optimizer_ok && a.violation != b.violation) return a.violation < b.violation;
  if (a.result.J_value != b.result.J_value) return a.result.J_value < b.result.J_value;
  return a.result.diagnostics.geodesic_residual < b.result.diagnostics.geodesic_residual;
}

SolveResult solve_h1(const MetricField& m, const BoundaryPair& bp, const SolveParams& params, const Sampler& sampler) {
  const int d = m.dim;
  const H1Layout L{params.N, d};

  Vector p = project(bp.P, hint_of(bp.P));
  Vector q = project(bp.Q, hint_of(bp.Q));
  p = project(bp.P, q);
  q = project(bp.Q, p);
  const double scale = params.restart_noise * std::max(1.0, (q - p).norm());

  auto attempt = [&](int k) -> std::optional<Attempt> {
    std::mt19937_64 rng(params.seed + static_cast<std::uint64_t>(k));
    Vector a = p, b = q;
    if (k > 0) {
      a = perturb_onto(bp.P, p, scale, rng);
      b = perturb_onto(bp.Q, q, scale, rng);
    }
    SpatialCurve x;
    x.nodes.resize(params.N + 1);
    for (int i = 0; i <= params.N; ++i) {
      const double s = static_cast<double>(i) / params.N;
      x.nodes[i] = (1 - s) * a.head(d) + s * b.head(d);
    }
    try {
      return descend_h1(m, bp, L, pack(L, x, a[d], b[d]), params, true);
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };
  const auto runs = run_indexed(params.restarts, params.parallel, attempt);

  std::optional<Attempt> best;
  for (const auto& r : runs)
    if (r && (!best || better(*r, *best))) best = r;
  if (!best) throw SolveNotFound("every restart left the chart", SolveResult{});

  SolveResult out = best->result;
  const H1Report h1 = check_H1(bp, sampler);
  for (const auto& w : h1.warnings) out.warnings.push_back("H1 check: " + w);
  if (!h1.Q_unbounded && h1.P_bounded) {
    const double gap = std::abs(delta_z(out.curve));
    if (gap > h1.D_Q + h1.D_P + params.tol.on) {
      out.warnings.push_back("|Delta| exceeds the sampled bound D_Q + D_P");
    }
  }
  if (!out.converged) throw SolveNotFound("no restart produced a certified normal geodesic", out);
  return out;
}

SolveResult lift_result(const MetricField& m, const BoundaryPair& bp, const BaseGeodesic& g,
                        const SolveParams& params) {
  const BaseMetric bm{m};
  SolveResult r;
  r.branch = Hypothesis::H2;
  r.curve = horizontal_lift(bm, g.curve, bp.lift_t0);
  r.J_value = eval_J(m, g.curve, delta_z(r.curve));
  r.diagnostics = certify(m, r.curve, bp, params.tol.causal);
  r.iterations = g.iterations;
  r.converged = g.converged && meets(r.diagnostics, params.tol);
  return r;
}

SolveResult solve_h2(const MetricField& m, const BoundaryPair& bp, const SolveParams& params) {
  const BaseMetric bm{m};
  const Submanifold P_S = base_of(bp.P);
  const Submanifold Q_S = base_of(bp.Q);
  SolveResult r;
  try {
    r = lift_result(m, bp, riemannian_normal_geodesic(bm, P_S, Q_S, params), params);
  } catch (const NoGeodesicFound& e) {
    if (e.best.curve.nodes.empty()) throw SolveNotFound(e.what(), SolveResult{});
    throw SolveNotFound(e.what(), lift_result(m, bp, e.best, params));
  }
  if (!r.converged) throw SolveNotFound("lift of the base geodesic failed certification", r);
  return r;
}

}  // namespace

SolveResult solve_normal_geodesic(const MetricField& m, const BoundaryPair& bp, const SolveParams& params,
                                  const std::optional<Sampler>& sampler) {
  params.validate();
  const Sampler s = sampler ? *sampler : make_sampler(m.chart, 10.0);
  validate_boundary_pair(bp, s);
  return bp.hypothesis == Hypothesis::H1 ? solve_h1(m, bp, params, s) : solve_h2(m, bp, params);
}

SolveResult refine(const MetricField& m, const BoundaryPair& bp, const SolveResult& result, int factor,
                   const SolveParams& params) {
  if (factor < 1) throw PreconditionError("refinement factor must be at least 1");
  if (factor == 1) return result;
  const SpacetimeCurve& c = result.curve;
  const int N = c.segments() * factor;
  SpacetimeCurve fine;
  fine.nodes.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const int seg = std::min(i / factor, c.segments() - 1);
    const double s = static_cast<double>(i - seg * factor) / factor;
    const SpacetimePoint& a = c.nodes[seg];
    const SpacetimePoint& b = c.nodes[seg + 1];
    fine.nodes[i] = {(1 - s) * a.x + s * b.x, (1 - s) * a.t + s * b.t};
  }
  SolveParams p = params;
  p.N = N;

  SolveResult out;
  try {
    if (result.branch == Hypothesis::H1) {
      const H1Layout L{N, m.dim};
      const Attempt a = descend_h1(m, bp, L, pack(L, spatial_part(fine), fine.nodes.front().t, fine.nodes.back().t), p, false);
      out = a.result;
    } else {
      const BaseMetric bm{m};
      const Submanifold P_S = base_of(bp.P);
      const Submanifold Q_S = base_of(bp.Q);
      const CurveEnergyResult r = minimize_curve_energy(riemannian_lagrangian(bm.field()), P_S, Q_S,
                                                        spatial_part(fine), p);
      BaseGeodesic g = certify_base(bm, r.curve, P_S, Q_S, p.tol);
      g.converged = g.converged && r.converged;
      g.iterations = r.iterations;
      out = lift_result(m, bp, g, p);
    }
  } catch (const Error& e) {
    SolveResult keep = result;
    keep.warnings.push_back(std::string("refinement failed: ") + e.what());
    return keep;
  }
  if (!out.converged && result.converged) {
    SolveResult keep = result;
    keep.warnings.push_back("refinement failed: refined curve did not certify");
    return keep;
  }
  out.warnings.insert(out.warnings.begin(), result.warnings.begin(), result.warnings.end());
  return out;
}

VariationCheck variational_principle_check(const MetricField& m, const SpacetimeCurve& c, const BoundaryPair& bp,
                                           int samples, std::uint64_t seed) {
  const int N = c.segments();
  const int n = c.dim() + 1;
  const std::vector<Vector> grad = grad_f(m, c);
  std::vector<Matrix> GR(N);
  for (int i = 0; i < N; ++i) GR[i] = riemannian_matrix(m, 0.5 * (c.nodes[i].x + c.nodes[i + 1].x));
  const Matrix TP = tangent_basis(bp.P, stack(c.nodes.front()));
  const Matrix TQ = tangent_basis(bp.Q, stack(c.nodes.back()));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> mode(1, 4);

  auto norm = [&](const std::vector<Vector>& z) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) {
      const Vector mid = 0.5 * (z[i] + z[i + 1]);
      const Vector dz = N * (z[i + 1] - z[i]);
      s += (mid.dot(GR[i] * mid) + dz.dot(GR[i] * dz)) / N;
    }
    return std::sqrt(s);
  };
  auto first_variation = [&](const std::vector<Vector>& z) {
    double s = 0.0;
    for (int i = 0; i <= N; ++i) s += grad[i].dot(z[i]);
    return s;
  };

  VariationCheck out;
  for (int k = 0; k < samples; ++k) {
    std::vector<Vector> z(N + 1, Vector::Zero(n));
    const bool killing = k % 2 == 0;
    if (killing) {
      // mu K with mu a random sine combination vanishing at both ends.
      const int a = mode(rng), b = mode(rng);
      const double ca = gauss(rng), cb = gauss(rng);
      for (int i = 0; i <= N; ++i) {
        const double s = static_cast<double>(i) / N;
        z[i][n - 1] = ca * std::sin(a * std::numbers::pi * s) + cb * std::sin(b * std::numbers::pi * s);
      }
    } else {
      Vector e0 = Vector::Zero(n), e1 = Vector::Zero(n);
      if (TP.cols() > 0) e0 = TP * Vector(Vector::NullaryExpr(TP.cols(), [&] { return gauss(rng); }));
      if (TQ.cols() > 0) e1 = TQ * Vector(Vector::NullaryExpr(TQ.cols(), [&] { return gauss(rng); }));
      const int a = mode(rng);
      const Vector bump = Vector::NullaryExpr(n, [&] { return gauss(rng); });
      for (int i = 0; i <= N; ++i) {
        const double s = static_cast<double>(i) / N;
        z[i] = (1 - s) * e0 + s * e1 + std::sin(a * std::numbers::pi * s) * bump;
      }
    }
    const double nz = norm(z);
    if (nz == 0.0) continue;
    const double v = std::abs(first_variation(z)) / nz;
    out.max_abs = std::max(out.max_abs, v);
    if (killing) out.max_killing = std::max(out.max_killing, v);
  }
  return out;
}

}  // namespace ngeo
