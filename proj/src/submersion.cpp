#include "ngeo/submersion.hpp"

#include <cmath>
#include <optional>
#include <random>

#include "ngeo/parallel.hpp"

namespace ngeo {

Matrix BaseMetric::h1(const Vector& x) const {
  const FieldJet j = source.values(x);
  const Vector w = j.g0 * j.delta;
  return j.g0 + w * w.transpose() / j.beta;
}

std::vector<Matrix> BaseMetric::h1_derivative(const Vector& x) const {
  const FieldJet j = source.jet(x);
  const Vector w = j.g0 * j.delta;
  std::vector<Matrix> out(source.dim);
  for (int k = 0; k < source.dim; ++k) {
    const Vector dw = j.d_g0[k] * j.delta + j.g0 * j.d_delta.col(k);
    out[k] = j.d_g0[k] + (dw * w.transpose() + w * dw.transpose()) / j.beta -
             w * w.transpose() * j.d_beta[k] / (j.beta * j.beta);
  }
  return out;
}

MatrixField BaseMetric::field() const {
  MatrixField f;
  f.dim = source.dim;
  f.chart = source.chart;
  f.fd_step = source.fd_step;
  const BaseMetric self = *this;
  f.value = [self](const Vector& x) { return self.h1(x); };
  f.derivative = [self](const Vector& x) { return self.h1_derivative(x); };
  return f;
}

double eval_h1(const BaseMetric& bm, const Vector& x, const Vector& v, const Vector& w) {
  bm.source.require_in_chart(x);
  return v.dot(bm.h1(x) * w);
}

BaseGeodesic certify_base(const BaseMetric& bm, const SpatialCurve& x, const Submanifold& P_S,
                          const Submanifold& Q_S, const Tolerances& tol) {
  const MatrixField A = bm.field();
  BaseGeodesic g;
  g.curve = x;
  g.energy = discrete_energy(riemannian_lagrangian(A), x);
  const double scale = std::max(1.0, 2.0 * g.energy);
  g.geodesic_residual = riemannian_geodesic_residual(A, x) / scale;
  g.orthogonality = riemannian_orthogonality(A, x, P_S, Q_S);
  const double on = std::max(P_S.value(x.nodes.front()).norm(), Q_S.value(x.nodes.back()).norm());
  g.converged = on <= tol.on && g.geodesic_residual <= tol.geo && g.orthogonality.r0 <= tol.orth &&
                g.orthogonality.r1 <= tol.orth;
  return g;
}

namespace {

Vector perturbed_projection(const Submanifold& s, const Vector& z, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector p = z;
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] += scale * gauss(rng);
  try {
    return project(s, p);
  } catch (const ProjectionFailed&) {
    return p;
  }
}

}  // namespace

BaseGeodesic riemannian_normal_geodesic(const BaseMetric& bm, const Submanifold& P_S, const Submanifold& Q_S,
                                        const SolveParams& params) {
  params.validate();
  if (!P_S.compact && !Q_S.compact) throw PreconditionError("at least one base set must be compact");
  const MatrixField A = bm.field();
  const SpatialCurve chord = initial_chord(P_S, Q_S, params.N);
  const Vector p0 = chord.nodes.front();
  const Vector q0 = chord.nodes.back();
  const double scale = params.restart_noise * std::max(1.0, (q0 - p0).norm());

  auto attempt = [&](int k) -> std::optional<BaseGeodesic> {
    std::mt19937_64 rng(params.seed + static_cast<std::uint64_t>(k));
    SpatialCurve init = chord;
    if (k > 0) {
      const Vector p = perturbed_projection(P_S, p0, scale, rng);
      const Vector q = perturbed_projection(Q_S, q0, scale, rng);
      for (int i = 0; i <= params.N; ++i) {
        const double s = static_cast<double>(i) / params.N;
        init.nodes[i] = (1 - s) * p + s * q;
      }
    }
    try {
      const CurveEnergyResult r = minimize_riemannian_energy(A, P_S, Q_S, params, init);
      BaseGeodesic g = certify_base(bm, r.curve, P_S, Q_S, params.tol);
      g.converged = g.converged && r.converged;
      g.iterations = r.iterations;
      return g;
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };
  const auto runs = run_indexed(std::max(1, params.restarts), params.parallel, attempt);

  std::optional<BaseGeodesic> best;
  std::optional<BaseGeodesic> fallback;
  for (const auto& r : runs) {
    if (!r) continue;
    if (r->converged) {
      if (!best || r->energy < best->energy ||
          (r->energy == best->energy && r->geodesic_residual < best->geodesic_residual))
        best = r;
    } else if (!fallback || r->energy < fallback->energy) {
      fallback = r;
    }
  }
  if (best) return *best;
  throw NoGeodesicFound("no restart produced a certified h1 normal geodesic (try more restarts)",
                        fallback ? *fallback : BaseGeodesic{});
}

SpacetimeCurve horizontal_lift(const BaseMetric& bm, const SpatialCurve& x, double t0) {
  const int N = x.segments();
  if (N < 1) throw PreconditionError("curve needs at least one segment");
  SpacetimeCurve c;
  c.nodes.resize(N + 1);
  c.nodes[0] = {x.nodes[0], t0};
  double t = t0;
  for (int i = 0; i < N; ++i) {
    const Vector v = N * (x.nodes[i + 1] - x.nodes[i]);
    const FieldJet j = bm.source.values(0.5 * (x.nodes[i] + x.nodes[i + 1]));
    t += (j.g0 * j.delta).dot(v) / j.beta / N;
    c.nodes[i + 1] = {x.nodes[i + 1], t};
  }
  return c;
}

double lift_is_geodesic_check(const MetricField& m, const SpacetimeCurve& c) { return geodesic_residual(m, c); }

}  // namespace ngeo
