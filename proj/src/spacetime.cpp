#include "ngeo/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ngeo {

bool Box::contains(const Vector& x, double margin) const {
  if (x.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower[i] + margin && x[i] <= upper[i] - margin)) return false;
  }
  return true;
}

namespace {

std::string describe(const Vector& x) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace

void MetricField::require_in_chart(const Vector& x) const {
  if (x.size() != dim) {
    throw DomainError("point has dimension " + std::to_string(x.size()) + ", chart has " +
                      std::to_string(dim));
  }
  if (!chart.contains(x)) throw DomainError("point " + describe(x) + " is outside the chart");
}

FieldJet MetricField::values(const Vector& x) const {
  require_in_chart(x);
  FieldJet j;
  j.g0 = g0(x);
  j.delta = delta(x);
  j.beta = beta(x);
  return j;
}

FieldJet MetricField::jet(const Vector& x) const {
  FieldJet j = values(x);
  const bool need_fd = !d_g0 || !d_delta || !d_beta;
  if (need_fd && !chart.contains(x, fd_step)) {
    throw DomainError("point " + describe(x) + " is within the differencing step of the chart edge");
  }
  j.d_g0.assign(dim, Matrix::Zero(dim, dim));
  j.d_delta = Matrix::Zero(dim, dim);
  j.d_beta = Vector::Zero(dim);
  if (need_fd) {
    const double h = fd_step;
    for (int k = 0; k < dim; ++k) {
      Vector xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      j.d_g0[k] = (g0(xp) - g0(xm)) / (2 * h);
      j.d_delta.col(k) = (delta(xp) - delta(xm)) / (2 * h);
      j.d_beta[k] = (beta(xp) - beta(xm)) / (2 * h);
    }
  }
  if (d_g0) j.d_g0 = d_g0(x);
  if (d_delta) j.d_delta = d_delta(x);
  if (d_beta) j.d_beta = d_beta(x);
  return j;
}

Matrix MetricField::full_metric(const Vector& x) const {
  const FieldJet j = values(x);
  Matrix G(dim + 1, dim + 1);
  G.topLeftCorner(dim, dim) = j.g0;
  const Vector p = j.g0 * j.delta;
  G.topRightCorner(dim, 1) = p;
  G.bottomLeftCorner(1, dim) = p.transpose();
  G(dim, dim) = -j.beta;
  return G;
}

std::vector<Matrix> MetricField::full_metric_derivative(const Vector& x) const {
  const FieldJet j = jet(x);
  std::vector<Matrix> dG(dim, Matrix::Zero(dim + 1, dim + 1));
  for (int k = 0; k < dim; ++k) {
    dG[k].topLeftCorner(dim, dim) = j.d_g0[k];
    const Vector dp = j.d_g0[k] * j.delta + j.g0 * j.d_delta.col(k);
    dG[k].topRightCorner(dim, 1) = dp;
    dG[k].bottomLeftCorner(1, dim) = dp.transpose();
    dG[k](dim, dim) = -j.d_beta[k];
  }
  return dG;
}

void MetricField::validate(int per_axis) const {
  if (dim <= 0) throw ModelError("metric dimension must be positive");
  if (chart.dim() != dim) throw ModelError("chart dimension does not match metric dimension");
  if (!g0 || !delta || !beta) throw ModelError("metric field callbacks are missing");
  if ((chart.upper - chart.lower).minCoeff() <= 0) throw ModelError("chart box is empty");
  per_axis = std::max(per_axis, 2);
  std::vector<int> idx(dim, 0);
  while (true) {
    Vector x(dim);
    for (int k = 0; k < dim; ++k) {
      x[k] = chart.lower[k] + (chart.upper[k] - chart.lower[k]) * idx[k] / (per_axis - 1);
    }
    const FieldJet j = values(x);
    if (j.g0.rows() != dim || j.g0.cols() != dim || j.delta.size() != dim) {
      throw ModelError("metric field returned wrong shapes at " + describe(x));
    }
    const double scale = std::max(1.0, j.g0.cwiseAbs().maxCoeff());
    if ((j.g0 - j.g0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ModelError("g0 is not symmetric at " + describe(x));
    }
    Eigen::LLT<Matrix> llt(j.g0);
    if (llt.info() != Eigen::Success) throw ModelError("g0 is not positive definite at " + describe(x));
    if (!(j.beta > 0.0) || !std::isfinite(j.beta)) {
      throw ModelError("beta is not positive at " + describe(x));
    }
    if (!j.delta.allFinite()) throw ModelError("delta is not finite at " + describe(x));
    int k = 0;
    while (k < dim && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == dim) break;
  }
}

std::string to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Lightlike: return "lightlike";
    case CausalCharacter::Spacelike: return "spacelike";
    case CausalCharacter::CausalBoundary: return "causal-boundary";
  }
  return "unknown";
}

std::optional<CausalCharacter> causal_character_from_string(const std::string& s) {
  for (auto c : {CausalCharacter::Timelike, CausalCharacter::Lightlike, CausalCharacter::Spacelike,
                 CausalCharacter::CausalBoundary}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

Vector stack(const SpacetimePoint& p) {
  Vector z(p.x.size() + 1);
  z << p.x, p.t;
  return z;
}

Vector stack(const TangentVector& v) {
  Vector z(v.y.size() + 1);
  z << v.y, v.tau;
  return z;
}

SpacetimePoint unstack_point(const Vector& z) {
  return {z.head(z.size() - 1), z[z.size() - 1]};
}

TangentVector unstack_vector(const Vector& z) {
  return {z.head(z.size() - 1), z[z.size() - 1]};
}

double eval_g(const MetricField& m, const SpacetimePoint& p, const TangentVector& v,
              const TangentVector& w) {
  const FieldJet j = m.values(p.x);
  const Vector gd = j.g0 * j.delta;
  return v.y.dot(j.g0 * w.y) + gd.dot(v.y) * w.tau + gd.dot(w.y) * v.tau - j.beta * v.tau * w.tau;
}

Matrix riemannian_matrix(const MetricField& m, const Vector& x) {
  const Matrix G = m.full_metric(x);
  const int n = static_cast<int>(G.rows());
  const double gKK = G(n - 1, n - 1);
  if (!(gKK < 0.0)) throw ModelError("Killing field is not timelike at the given point");
  const Vector gK = G.col(n - 1);
  return G - 2.0 * gK * gK.transpose() / gKK;
}

double eval_gR(const MetricField& m, const SpacetimePoint& p, const TangentVector& v,
               const TangentVector& w) {
  return stack(v).dot(riemannian_matrix(m, p.x) * stack(w));
}

SpacetimePoint killing_flow(const SpacetimePoint& p, double s) { return {p.x, p.t + s}; }

double s_R(const SpacetimePoint& p) { return -p.t; }

Vector Christoffel::contract(const Vector& v, const Vector& w) const {
  Vector out(dim());
  for (int k = 0; k < dim(); ++k) out[k] = v.dot(gamma[k] * w);
  return out;
}

Christoffel christoffel_from(const Matrix& G, const std::vector<Matrix>& dG) {
  const int n = static_cast<int>(G.rows());
  Eigen::FullPivLU<Matrix> lu(G);
  if (!lu.isInvertible()) throw ModelError("metric matrix is singular");
  const Matrix Ginv = lu.inverse();
  auto dg = [&](int l, int i, int j) {
    return l < static_cast<int>(dG.size()) ? dG[l](i, j) : 0.0;
  };
  // first[l](i, j) = Gamma_{l i j} (all indices down)
  std::vector<Matrix> first(n, Matrix::Zero(n, n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) first[l](i, j) = 0.5 * (dg(i, l, j) + dg(j, l, i) - dg(l, i, j));
  Christoffel c;
  c.gamma.assign(n, Matrix::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) c.gamma[k] += Ginv(k, l) * first[l];
  return c;
}

Christoffel christoffel(const MetricField& m, const SpacetimePoint& p) {
  return christoffel_from(m.full_metric(p.x), m.full_metric_derivative(p.x));
}

namespace {

void require_curve(const MetricField& m, const SpacetimeCurve& c, int min_segments) {
  if (c.segments() < min_segments) {
    throw PreconditionError("curve needs at least " + std::to_string(min_segments) + " segments");
  }
  for (const auto& node : c.nodes) {
    if (node.x.size() != m.dim) throw PreconditionError("curve dimension does not match metric");
  }
}

}  // namespace

double geodesic_residual(const MetricField& m, const SpacetimeCurve& c) {
  require_curve(m, c, 4);
  const int N = c.segments();
  const double h = 1.0 / N;
  double worst = 0.0;
  for (int i = 1; i < N; ++i) {
    const Vector zm = stack(c.nodes[i - 1]);
    const Vector z0 = stack(c.nodes[i]);
    const Vector zp = stack(c.nodes[i + 1]);
    const Vector vel = (zp - zm) / (2 * h);
    const Vector acc = (zp - 2 * z0 + zm) / (h * h);
    const Vector r = acc + christoffel(m, c.nodes[i]).contract(vel, vel);
    const double n2 = r.dot(riemannian_matrix(m, c.nodes[i].x) * r);
    worst = std::max(worst, std::sqrt(std::max(n2, 0.0)));
  }
  return worst;
}

std::vector<double> segment_energies(const MetricField& m, const SpacetimeCurve& c) {
  require_curve(m, c, 1);
  const int N = c.segments();
  std::vector<double> out(N);
  for (int i = 0; i < N; ++i) {
    const Vector u = N * (stack(c.nodes[i + 1]) - stack(c.nodes[i]));
    const Vector mid = 0.5 * (c.nodes[i].x + c.nodes[i + 1].x);
    out[i] = u.dot(m.full_metric(mid) * u);
  }
  return out;
}

std::vector<double> segment_killing_products(const MetricField& m, const SpacetimeCurve& c) {
  require_curve(m, c, 1);
  const int N = c.segments();
  std::vector<double> out(N);
  for (int i = 0; i < N; ++i) {
    const Vector u = N * (stack(c.nodes[i + 1]) - stack(c.nodes[i]));
    const Vector mid = 0.5 * (c.nodes[i].x + c.nodes[i + 1].x);
    const Matrix G = m.full_metric(mid);
    out[i] = G.row(G.rows() - 1).dot(u);
  }
  return out;
}

double gR_energy_scale(const MetricField& m, const SpacetimeCurve& c) {
  require_curve(m, c, 1);
  const int N = c.segments();
  std::vector<double> vals(N);
  for (int i = 0; i < N; ++i) {
    const Vector u = N * (stack(c.nodes[i + 1]) - stack(c.nodes[i]));
    const Vector mid = 0.5 * (c.nodes[i].x + c.nodes[i + 1].x);
    vals[i] = u.dot(riemannian_matrix(m, mid) * u);
  }
  return median(std::move(vals));
}

std::pair<Vector, Vector> endpoint_momenta(const MetricField& m, const SpacetimeCurve& c) {
  require_curve(m, c, 1);
  const int N = c.segments();
  const int d = m.dim;
  auto momentum = [&](int seg, double sign) {
    const Vector u = N * (stack(c.nodes[seg + 1]) - stack(c.nodes[seg]));
    const Vector mid = 0.5 * (c.nodes[seg].x + c.nodes[seg + 1].x);
    Vector p = m.full_metric(mid) * u;
    const std::vector<Matrix> dG = m.full_metric_derivative(mid);
    for (int k = 0; k < d; ++k) p[k] += sign * u.dot(dG[k] * u) / (4.0 * N);
    return p;
  };
  return {momentum(0, -1.0), momentum(N - 1, 1.0)};
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

EnergyCharacter energy_and_character(const MetricField& m, const SpacetimeCurve& c,
                                     double tol_causal) {
  const std::vector<double> e = segment_energies(m, c);
  EnergyCharacter out;
  out.E = median(e);
  const double scale = gR_energy_scale(m, c);
  if (scale == 0.0) {
    // constant curve
    out.character = CausalCharacter::Spacelike;
    return out;
  }
  const double tol = tol_causal * scale;
  const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
  if (std::abs(out.E) <= tol) {
    out.character = CausalCharacter::Lightlike;
  } else if (*lo < -tol && *hi > tol) {
    // segments disagree on the sign: no single character
    out.character = CausalCharacter::CausalBoundary;
  } else {
    out.character = out.E < 0 ? CausalCharacter::Timelike : CausalCharacter::Spacelike;
  }
  return out;
}

}  // namespace ngeo
