#include "ngeo/reduction.hpp"

#include <algorithm>
#include <cmath>

namespace ngeo {

namespace {

void require_spatial(const MetricField& m, const SpatialCurve& x) {
  if (x.segments() < 2) throw PreconditionError("spatial curve needs at least two segments");
  for (const Vector& v : x.nodes) {
    if (v.size() != m.dim) throw PreconditionError("curve dimension does not match metric");
  }
}

struct SegmentFields {
  Vector v;         // segment velocity N (x_{i+1} - x_i)
  Vector mid;
  Matrix g0;
  Vector p;         // g0 delta
  double beta = 1;
  double pv = 0;    // g0[delta, v]
};

SegmentFields segment(const MetricField& m, const SpatialCurve& x, int i) {
  const int N = x.segments();
  SegmentFields s;
  s.v = N * (x.nodes[i + 1] - x.nodes[i]);
  s.mid = 0.5 * (x.nodes[i] + x.nodes[i + 1]);
  const FieldJet j = m.values(s.mid);
  s.g0 = j.g0;
  s.p = j.g0 * j.delta;
  s.beta = j.beta;
  s.pv = s.p.dot(s.v);
  return s;
}

}  // namespace

ReducedIntegrals reduced_integrals(const MetricField& m, const SpatialCurve& x) {
  require_spatial(m, x);
  const int N = x.segments();
  const double w = 1.0 / N;
  ReducedIntegrals r;
  for (int i = 0; i < N; ++i) {
    const SegmentFields s = segment(m, x, i);
    r.energy += w * s.v.dot(s.g0 * s.v);
    r.drift += w * s.pv / s.beta;
    r.drift_sq += w * s.pv * s.pv / s.beta;
    r.inv_beta += w / s.beta;
  }
  return r;
}

double compute_Cz(const MetricField& m, const SpatialCurve& x, double Delta) {
  const ReducedIntegrals r = reduced_integrals(m, x);
  return (r.drift - Delta) / r.inv_beta;
}

SpacetimeCurve reconstruct_t(const MetricField& m, const ReducedState& rs) {
  const double C = compute_Cz(m, rs.x, rs.Delta);
  const int N = rs.x.segments();
  SpacetimeCurve c;
  c.nodes.resize(N + 1);
  c.nodes[0] = {rs.x.nodes[0], rs.t0};
  double t = rs.t0;
  for (int i = 0; i < N; ++i) {
    const SegmentFields s = segment(m, rs.x, i);
    t += (s.pv - C) / s.beta / N;
    c.nodes[i + 1] = {rs.x.nodes[i + 1], t};
  }
  // Pin the last node to Delta; the running sum differs only by rounding.
  c.nodes[N].t = rs.t0 + rs.Delta;
  return c;
}

double eval_J(const MetricField& m, const SpatialCurve& x, double Delta) {
  const ReducedIntegrals r = reduced_integrals(m, x);
  const double gap = r.drift - Delta;
  return 0.5 * r.energy + 0.5 * r.drift_sq - 0.5 * gap * gap / r.inv_beta;
}

JGradient grad_J(const MetricField& m, const SpatialCurve& x, double Delta) {
  const ReducedIntegrals r = reduced_integrals(m, x);
  const int N = x.segments();
  const int d = m.dim;
  const double w = 1.0 / N;
  const double C = (r.drift - Delta) / r.inv_beta;

  JGradient g;
  g.value = 0.5 * r.energy + 0.5 * r.drift_sq - 0.5 * C * C * r.inv_beta;
  g.dDelta = C;
  g.nodes.assign(N + 1, Vector::Zero(d));

  // J = 1/2 sum w E_i - 1/2 (A - Delta)^2 / B, with per-segment
  //   E_i = v^T g0 v + (p.v)^2 / beta,  a_i = (p.v) / beta,  b_i = 1 / beta,
  // so dJ = sum w [1/2 dE_i - C da_i + 1/2 C^2 db_i].
  for (int i = 0; i < N; ++i) {
    const Vector v = N * (x.nodes[i + 1] - x.nodes[i]);
    const Vector mid = 0.5 * (x.nodes[i] + x.nodes[i + 1]);
    const FieldJet j = m.jet(mid);
    const Vector p = j.g0 * j.delta;
    const double beta = j.beta;
    const double pv = p.dot(v);

    // derivative with respect to the velocity
    const Vector dv = j.g0 * v + (pv / beta) * p - (C / beta) * p;
    // derivative with respect to the midpoint
    Vector dm(d);
    for (int k = 0; k < d; ++k) {
      const Vector dp = j.d_g0[k] * j.delta + j.g0 * j.d_delta.col(k);
      const double dpv = dp.dot(v);
      const double db = j.d_beta[k];
      const double dE = v.dot(j.d_g0[k] * v) + 2.0 * pv * dpv / beta - pv * pv * db / (beta * beta);
      const double da = dpv / beta - pv * db / (beta * beta);
      const double dinv = -db / (beta * beta);
      dm[k] = 0.5 * dE - C * da + 0.5 * C * C * dinv;
    }
    g.nodes[i + 1] += w * (N * dv + 0.5 * dm);
    g.nodes[i] += w * (-N * dv + 0.5 * dm);
  }
  return g;
}

double eval_f(const MetricField& m, const SpacetimeCurve& c) {
  const std::vector<double> e = segment_energies(m, c);
  double sum = 0.0;
  for (double v : e) sum += v;
  return 0.5 * sum / c.segments();
}

std::vector<Vector> grad_f(const MetricField& m, const SpacetimeCurve& c) {
  const int N = c.segments();
  if (N < 1) throw PreconditionError("curve needs at least one segment");
  const int d = m.dim;
  std::vector<Vector> g(N + 1, Vector::Zero(d + 1));
  for (int i = 0; i < N; ++i) {
    const Vector u = N * (stack(c.nodes[i + 1]) - stack(c.nodes[i]));
    const Vector mid = 0.5 * (c.nodes[i].x + c.nodes[i + 1].x);
    const Vector Gu = m.full_metric(mid) * u;
    const std::vector<Matrix> dG = m.full_metric_derivative(mid);
    Vector dm = Vector::Zero(d + 1);
    for (int k = 0; k < d; ++k) dm[k] = 0.25 * u.dot(dG[k] * u) / N;
    g[i + 1] += Gu + dm;
    g[i] += -Gu + dm;
  }
  return g;
}

ConservationRecord conservation_record(const MetricField& m, const SpacetimeCurve& c) {
  ConservationRecord r;
  const std::vector<double> k = segment_killing_products(m, c);
  const std::vector<double> e = segment_energies(m, c);
  r.C_z = median(k);
  r.E_z = median(e);
  for (double v : k) r.max_deviation = std::max(r.max_deviation, std::abs(v - r.C_z));
  for (double v : e) r.E_deviation = std::max(r.E_deviation, std::abs(v - r.E_z));
  return r;
}

SpatialCurve spatial_part(const SpacetimeCurve& c) {
  SpatialCurve x;
  x.nodes.reserve(c.nodes.size());
  for (const auto& n : c.nodes) x.nodes.push_back(n.x);
  return x;
}

double delta_z(const SpacetimeCurve& c) { return c.nodes.back().t - c.nodes.front().t; }

ReducedState reduced_state(const SpacetimeCurve& c) {
  return {spatial_part(c), c.nodes.front().t, delta_z(c)};
}

}  // namespace ngeo
