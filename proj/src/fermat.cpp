#include "ngeo/fermat.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "ngeo/parallel.hpp"

namespace ngeo {

std::string to_string(Side s) { return s == Side::Future ? "future" : "past"; }

FermatStructure::FermatStructure(MetricField base, Side side) : base_(std::move(base)), side_(side) {}

Matrix FermatStructure::h(const Vector& x) const {
  const FieldJet j = base_.values(x);
  const Vector w = j.g0 * j.delta / j.beta;
  return w * w.transpose() + j.g0 / j.beta;
}

Vector FermatStructure::omega(const Vector& x) const {
  const FieldJet j = base_.values(x);
  return sign() * j.g0 * j.delta / j.beta;
}

double FermatStructure::omega_norm(const Vector& x) const {
  const Vector w = omega(x);
  return std::sqrt(std::max(0.0, w.dot(h(x).ldlt().solve(w))));
}

void FermatStructure::validate(int per_axis) const {
  base_.validate(per_axis);
  const int d = base_.dim;
  std::vector<int> idx(d, 0);
  while (true) {
    Vector x(d);
    for (int k = 0; k < d; ++k) {
      x[k] = base_.chart.lower[k] + (base_.chart.upper[k] - base_.chart.lower[k]) * idx[k] / (per_axis - 1);
    }
    if (Eigen::LLT<Matrix>(h(x)).info() != Eigen::Success) throw ModelError("Fermat h is not positive definite");
    if (!(omega_norm(x) < 1.0)) throw ModelError("Fermat one-form has norm >= 1");
    int k = 0;
    while (k < d && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == d) break;
  }
}

namespace {

struct RandersParts {
  double a = 0;  // g0~[delta, y]
  double b = 0;  // g0~[y, y]
  double r = 0;  // sqrt(a^2 + b)
};

RandersParts parts(const FieldJet& j, const Vector& y) {
  RandersParts p;
  p.a = (j.g0 * j.delta).dot(y) / j.beta;
  p.b = y.dot(j.g0 * y) / j.beta;
  p.r = std::sqrt(p.a * p.a + p.b);
  return p;
}

// s a + r without cancellation: when s a < 0 use b / (r - s a).
double randers(const RandersParts& p, double s) {
  const double sa = s * p.a;
  if (sa >= 0) return sa + p.r;
  const double den = p.r - sa;
  return den > 0 ? p.b / den : 0.0;
}

}  // namespace

double F(const FermatStructure& fs, const Vector& x, const Vector& y) {
  return randers(parts(fs.base().values(x), y), fs.sign());
}

double fermat_length(const FermatStructure& fs, const SpatialCurve& x) {
  const int N = x.segments();
  if (N < 1) throw PreconditionError("curve needs at least one segment");
  double len = 0.0;
  for (int i = 0; i < N; ++i) {
    len += F(fs, 0.5 * (x.nodes[i] + x.nodes[i + 1]), N * (x.nodes[i + 1] - x.nodes[i]));
  }
  return len / N;
}

double arrival_time(const FermatStructure& fs, const SpatialCurve& x) {
  return fs.sign() * fermat_length(fs, x);
}

SpacetimeCurve lightlike_lift(const FermatStructure& fs, const SpatialCurve& x, double t0) {
  const int N = x.segments();
  if (N < 1) throw PreconditionError("curve needs at least one segment");
  SpacetimeCurve c;
  c.nodes.resize(N + 1);
  c.nodes[0] = {x.nodes[0], t0};
  double t = t0;
  for (int i = 0; i < N; ++i) {
    const Vector v = N * (x.nodes[i + 1] - x.nodes[i]);
    if (v.squaredNorm() == 0.0) {
      throw DegenerateCurve("segment " + std::to_string(i) + " has zero velocity");
    }
    t += fs.sign() * F(fs, 0.5 * (x.nodes[i] + x.nodes[i + 1]), v) / N;
    c.nodes[i + 1] = {x.nodes[i + 1], t};
  }
  return c;
}

double T_tilde(const MetricField& m, const SpatialCurve& x, Side side) {
  const ReducedIntegrals r = reduced_integrals(m, x);
  const double radicand = (r.energy + r.drift_sq) * r.inv_beta;
  if (radicand < 0) throw ModelError("negative radicand in T~ (metric data is inconsistent)");
  return r.drift + (side == Side::Future ? 1.0 : -1.0) * std::sqrt(radicand);
}

StimoCheck check_stimo(const MetricField& m, const SpatialCurve& x) {
  const FermatStructure plus(m, Side::Future);
  const FermatStructure minus(m, Side::Past);
  const double t_plus = arrival_time(plus, x);
  const double t_minus = arrival_time(minus, x);
  StimoCheck c;
  c.slack = std::min(T_tilde(m, x, Side::Future) - t_plus, t_minus - T_tilde(m, x, Side::Past));
  c.holds = c.slack >= -1e-9;
  return c;
}

CurveLagrangian fermat_lagrangian(const FermatStructure& fs) {
  return [fs](const Vector& x, const Vector& v, bool with_gradient) {
    const FieldJet j = with_gradient ? fs.base().jet(x) : fs.base().values(x);
    const RandersParts p = parts(j, v);
    const double s = fs.sign();
    const double Fv = randers(p, s);
    LagrangianTerms t;
    t.value = 0.5 * Fv * Fv;
    if (!with_gradient) return t;
    const int d = static_cast<int>(v.size());
    t.d_v = Vector::Zero(d);
    t.d_x = Vector::Zero(d);
    if (p.r == 0.0) return t;
    const Vector pd = j.g0 * j.delta;
    const Vector da_dv = pd / j.beta;
    const Vector db_dv = 2.0 * j.g0 * v / j.beta;
    t.d_v = Fv * (s * da_dv + (p.a * da_dv + 0.5 * db_dv) / p.r);
    for (int k = 0; k < d; ++k) {
      const Vector dpd = j.d_g0[k] * j.delta + j.g0 * j.d_delta.col(k);
      const double dbeta = j.d_beta[k];
      const double da = dpd.dot(v) / j.beta - p.a * dbeta / j.beta;
      const double db = v.dot(j.d_g0[k] * v) / j.beta - p.b * dbeta / j.beta;
      t.d_x[k] = Fv * (s * da + (p.a * da + 0.5 * db) / p.r);
    }
    return t;
  };
}

FermatDistance fermat_distance(const FermatStructure& fs, const Vector& p, const Vector& q,
                               const SolveParams& params) {
  params.validate();
  fs.base().require_in_chart(p);
  fs.base().require_in_chart(q);
  const Submanifold start = make_base_point(p);
  const Submanifold end = make_base_point(q);
  const CurveLagrangian L = fermat_lagrangian(fs);
  const int N = params.N;
  const int d = static_cast<int>(p.size());

  const double scale = std::max((q - p).norm(), 1e-3) * params.restart_noise;

  // Restart 0 is the chord; later ones add a random low-frequency bump.
  auto attempt = [&](int k) -> std::optional<CurveEnergyResult> {
    std::mt19937_64 rng(params.seed + static_cast<std::uint64_t>(k));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector bump = Vector::Zero(d);
    if (k > 0)
      for (int c = 0; c < d; ++c) bump[c] = scale * gauss(rng);
    SpatialCurve init;
    init.nodes.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
      const double s = static_cast<double>(i) / N;
      init.nodes[i] = (1 - s) * p + s * q + std::sin(std::numbers::pi * s) * bump;
    }
    try {
      return minimize_curve_energy(L, start, end, init, params);
    } catch (const DomainError&) {
      return std::nullopt;  // perturbed start left the chart
    }
  };
  const auto runs = run_indexed(params.restarts, params.parallel, attempt);

  FermatDistance best;
  best.value = std::numeric_limits<double>::infinity();
  for (const auto& r : runs) {
    if (!r || !r->converged) continue;
    const double len = fermat_length(fs, r->curve);
    ++best.restarts_converged;
    if (len < best.value) {
      best.value = len;
      best.curve = r->curve;
    }
  }
  if (best.restarts_converged == 0) throw NoEstimate("no restart of the distance minimization converged");
  return best;
}

}  // namespace ngeo
