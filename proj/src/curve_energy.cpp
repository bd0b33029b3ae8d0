#include "ngeo/curve_energy.hpp"

#include <cmath>

#include "ngeo/descent.hpp"

namespace ngeo {

Matrix MatrixField::at(const Vector& x) const {
  if (!chart.contains(x)) throw DomainError("point outside the chart of the matrix field");
  return value(x);
}

std::vector<Matrix> MatrixField::derivative_at(const Vector& x) const {
  if (derivative) {
    if (!chart.contains(x)) throw DomainError("point outside the chart of the matrix field");
    return derivative(x);
  }
  if (!chart.contains(x, fd_step)) throw DomainError("point within the differencing step of the chart edge");
  std::vector<Matrix> out(dim);
  for (int k = 0; k < dim; ++k) {
    Vector xp = x, xm = x;
    xp[k] += fd_step;
    xm[k] -= fd_step;
    out[k] = (value(xp) - value(xm)) / (2 * fd_step);
  }
  return out;
}

CurveLagrangian riemannian_lagrangian(const MatrixField& A) {
  return [A](const Vector& x, const Vector& v, bool with_gradient) {
    LagrangianTerms t;
    const Matrix M = A.at(x);
    const Vector Mv = M * v;
    t.value = 0.5 * v.dot(Mv);
    if (with_gradient) {
      t.d_v = Mv;
      const std::vector<Matrix> dM = A.derivative_at(x);
      t.d_x.resize(A.dim);
      for (int k = 0; k < A.dim; ++k) t.d_x[k] = 0.5 * v.dot(dM[k] * v);
    }
    return t;
  };
}

double discrete_energy(const CurveLagrangian& L, const SpatialCurve& x) {
  const int N = x.segments();
  double e = 0.0;
  for (int i = 0; i < N; ++i) {
    e += L(0.5 * (x.nodes[i] + x.nodes[i + 1]), N * (x.nodes[i + 1] - x.nodes[i]), false).value;
  }
  return e / N;
}

namespace {

Vector flatten(const SpatialCurve& x) {
  const int d = x.dim();
  Vector theta(x.nodes.size() * d);
  for (std::size_t i = 0; i < x.nodes.size(); ++i) theta.segment(i * d, d) = x.nodes[i];
  return theta;
}

SpatialCurve unflatten(const Vector& theta, int N, int d) {
  SpatialCurve x;
  x.nodes.resize(N + 1);
  for (int i = 0; i <= N; ++i) x.nodes[i] = theta.segment(i * d, d);
  return x;
}

std::vector<int> range(int from, int count) {
  std::vector<int> r(count);
  for (int i = 0; i < count; ++i) r[i] = from + i;
  return r;
}

Vector hint_or_zero(const Submanifold& s) {
  return s.hint.size() == s.ambient_dim() ? s.hint : Vector::Zero(s.ambient_dim());
}

}  // namespace

SpatialCurve initial_chord(const Submanifold& start, const Submanifold& end, int N) {
  Vector p = project(start, hint_or_zero(start));
  Vector q = project(end, hint_or_zero(end));
  p = project(start, q);
  q = project(end, p);
  SpatialCurve x;
  x.nodes.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double s = static_cast<double>(i) / N;
    x.nodes[i] = (1 - s) * p + s * q;
  }
  return x;
}

CurveEnergyResult minimize_curve_energy(const CurveLagrangian& L, const Submanifold& start,
                                        const Submanifold& end, const SpatialCurve& initial,
                                        const SolveParams& params) {
  const int N = initial.segments();
  const int d = initial.dim();
  if (N < 2) throw PreconditionError("initial curve needs at least two segments");
  if (start.ambient_dim() != d || end.ambient_dim() != d) {
    throw PreconditionError("endpoint submanifolds do not live in the curve's space");
  }

  DescentProblem prob;
  prob.objective = [&L, N, d](const Vector& theta, Vector* grad) {
    const double w = 1.0 / N;
    double e = 0.0;
    if (grad) grad->setZero(theta.size());
    for (int i = 0; i < N; ++i) {
      const Vector a = theta.segment(i * d, d);
      const Vector b = theta.segment((i + 1) * d, d);
      const LagrangianTerms t = L(0.5 * (a + b), N * (b - a), grad != nullptr);
      e += w * t.value;
      if (grad) {
        grad->segment((i + 1) * d, d) += w * (N * t.d_v + 0.5 * t.d_x);
        grad->segment(i * d, d) += w * (-N * t.d_v + 0.5 * t.d_x);
      }
    }
    return e;
  };
  prob.metric = curve_metric(N, d);
  prob.ends = {{range(0, d), &start}, {range(N * d, d), &end}};

  Vector theta = flatten(initial);
  CurveEnergyResult r;
  for (double mu : params.penalty_schedule) {
    r.iterations += penalty_descent(prob, theta, mu, params.max_iters, params.grad_tol, params.step).iterations;
  }
  ProjectionSettings ps;
  ps.tol_on = params.tol.on;
  const DescentStats polish = projected_descent(prob, theta, params.max_iters, params.grad_tol, params.step, ps);
  r.iterations += polish.iterations;
  r.grad_norm = polish.grad_norm;
  r.curve = unflatten(theta, N, d);
  r.energy = discrete_energy(L, r.curve);
  r.violation = endpoint_violation(prob, theta);
  r.converged = polish.converged && r.violation <= params.tol.on;
  return r;
}

CurveEnergyResult minimize_riemannian_energy(const MatrixField& A, const Submanifold& start,
                                             const Submanifold& end, const SolveParams& params,
                                             const std::optional<SpatialCurve>& initial) {
  const SpatialCurve init = initial ? *initial : initial_chord(start, end, params.N);
  return minimize_curve_energy(riemannian_lagrangian(A), start, end, init, params);
}

CurveEnergyResult minimize_riemannian_energy(const MatrixField& A, const Vector& p, const Vector& q,
                                             const SolveParams& params) {
  return minimize_riemannian_energy(A, make_base_point(p), make_base_point(q), params);
}

double riemannian_geodesic_residual(const MatrixField& A, const SpatialCurve& x) {
  const int N = x.segments();
  if (N < 4) throw PreconditionError("curve needs at least four segments");
  const double h = 1.0 / N;
  double worst = 0.0;
  for (int i = 1; i < N; ++i) {
    const Vector vel = (x.nodes[i + 1] - x.nodes[i - 1]) / (2 * h);
    const Vector acc = (x.nodes[i + 1] - 2 * x.nodes[i] + x.nodes[i - 1]) / (h * h);
    const Matrix M = A.at(x.nodes[i]);
    const Vector r = acc + christoffel_from(M, A.derivative_at(x.nodes[i])).contract(vel, vel);
    worst = std::max(worst, std::sqrt(std::max(0.0, r.dot(M * r))));
  }
  return worst;
}

OrthogonalityResidual riemannian_orthogonality(const MatrixField& A, const SpatialCurve& x,
                                               const Submanifold& start, const Submanifold& end) {
  const int N = x.segments();
  auto momentum = [&](int seg, double sign, double& speed) {
    const Vector v = N * (x.nodes[seg + 1] - x.nodes[seg]);
    const Vector mid = 0.5 * (x.nodes[seg] + x.nodes[seg + 1]);
    const Matrix M = A.at(mid);
    Vector p = M * v;
    const std::vector<Matrix> dM = A.derivative_at(mid);
    for (int k = 0; k < A.dim; ++k) p[k] += sign * v.dot(dM[k] * v) / (4.0 * N);
    speed = std::sqrt(std::max(0.0, v.dot(M * v)));
    return p;
  };
  auto worst = [](const Matrix& B, const Vector& p) {
    double r = 0.0;
    for (Eigen::Index k = 0; k < B.cols(); ++k) r = std::max(r, std::abs(p.dot(B.col(k))));
    return r;
  };
  double s0 = 0, s1 = 0;
  const Vector p0 = momentum(0, -1.0, s0);
  const Vector p1 = momentum(N - 1, 1.0, s1);
  OrthogonalityResidual out;
  out.r0 = worst(tangent_basis(start, x.nodes.front()), p0) / (1.0 + s0);
  out.r1 = worst(tangent_basis(end, x.nodes.back()), p1) / (1.0 + s1);
  return out;
}

}  // namespace ngeo
