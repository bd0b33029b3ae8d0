#include "ngeo/submanifold.hpp"

#include <algorithm>
#include <cmath>

namespace ngeo {

Submanifold::Submanifold(int ambient_dim, int codim, Constraint phi, Jacobian jacobian)
    : ambient_dim_(ambient_dim), codim_(codim), phi_(std::move(phi)), jacobian_(std::move(jacobian)) {
  if (ambient_dim <= 0 || codim <= 0 || codim > ambient_dim) {
    throw PreconditionError("submanifold needs 0 < codim <= ambient dimension");
  }
  if (!phi_) throw PreconditionError("submanifold constraint is empty");
}

Vector Submanifold::value(const Vector& z) const {
  if (z.size() != ambient_dim_) {
    throw PreconditionError("point has dimension " + std::to_string(z.size()) +
                            ", submanifold lives in dimension " + std::to_string(ambient_dim_));
  }
  return phi_(z);
}

Matrix Submanifold::jacobian(const Vector& z) const {
  if (jacobian_) {
    if (z.size() != ambient_dim_) throw PreconditionError("point dimension mismatch");
    return jacobian_(z);
  }
  Matrix J(codim_, ambient_dim_);
  for (int i = 0; i < ambient_dim_; ++i) {
    const double h = 1e-7 * std::max(1.0, std::abs(z[i]));
    Vector zp = z, zm = z;
    zp[i] += h;
    zm[i] -= h;
    J.col(i) = (value(zp) - value(zm)) / (2 * h);
  }
  return J;
}

Vector project(const Submanifold& sub, const Vector& z, const ProjectionSettings& s) {
  Vector cur = z;
  Vector phi = sub.value(cur);
  double res = phi.norm();
  double lambda = 1e-12;
  for (int it = 0; it < s.max_iters; ++it) {
    if (res <= s.tol_on) return cur;
    const Matrix J = sub.jacobian(cur);
    const Matrix JJt = J * J.transpose();
    const double scale = std::max(1.0, JJt.diagonal().maxCoeff());
    bool improved = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Matrix A = JJt;
      A.diagonal().array() += lambda * scale;
      const Vector step = -J.transpose() * A.ldlt().solve(phi);
      const Vector trial = cur + step;
      const Vector trial_phi = sub.value(trial);
      const double trial_res = trial_phi.norm();
      if (std::isfinite(trial_res) && trial_res < res) {
        cur = trial;
        phi = trial_phi;
        res = trial_res;
        lambda = std::max(lambda * 0.1, 1e-15);
        improved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  if (res <= s.tol_on) return cur;
  throw ProjectionFailed("projection onto " + (sub.label.empty() ? std::string("submanifold") : sub.label) +
                             " did not converge (|Phi| = " + std::to_string(res) + ")",
                         cur);
}

SpacetimePoint project(const Submanifold& sub, const SpacetimePoint& p, const ProjectionSettings& s) {
  return unstack_point(project(sub, stack(p), s));
}

namespace {

Matrix kernel_basis(const Matrix& J) {
  const int n = static_cast<int>(J.cols());
  const int k = static_cast<int>(J.rows());
  if (k == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(J, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  if (sv.size() < k || !(sv[k - 1] > 1e-10 * std::max(1.0, sv[0]))) {
    throw DegenerateSubmanifold("constraint Jacobian is rank deficient");
  }
  return svd.matrixV().rightCols(n - k);
}

}  // namespace

Matrix tangent_basis(const Submanifold& sub, const Vector& z) {
  const Matrix J = sub.jacobian(z);
  const int n = sub.ambient_dim();
  if (!sub.cylindrical || n < 2) return kernel_basis(J);
  // Killing direction first, then the spatial kernel.
  const int d = n - 1;
  const Matrix spatial = kernel_basis(J.leftCols(d));
  Matrix B = Matrix::Zero(n, spatial.cols() + 1);
  B(d, 0) = 1.0;
  B.block(0, 1, d, spatial.cols()) = spatial;
  return B;
}

std::vector<TangentVector> tangent_basis(const Submanifold& sub, const SpacetimePoint& p) {
  const Matrix B = tangent_basis(sub, stack(p));
  std::vector<TangentVector> out;
  out.reserve(B.cols());
  for (Eigen::Index c = 0; c < B.cols(); ++c) out.push_back(unstack_vector(B.col(c)));
  return out;
}

Submanifold make_point(const SpacetimePoint& p) {
  const Vector z = stack(p);
  const int n = static_cast<int>(z.size());
  Submanifold s(n, n, [z](const Vector& w) -> Vector { return w - z; },
                [n](const Vector&) -> Matrix { return Matrix::Identity(n, n); });
  s.compact = true;
  s.hint = z;
  s.label = "point";
  return s;
}

Submanifold make_plane(const Vector& normal, double offset) {
  const int n = static_cast<int>(normal.size());
  if (normal.norm() == 0.0) throw PreconditionError("plane normal must be nonzero");
  Submanifold s(n, 1,
                [normal, offset](const Vector& z) -> Vector {
                  Vector v(1);
                  v[0] = normal.dot(z) - offset;
                  return v;
                },
                [normal](const Vector&) -> Matrix { return normal.transpose(); });
  s.cylindrical = normal[n - 1] == 0.0;
  s.hint = normal * (offset / normal.squaredNorm());
  s.label = "plane";
  return s;
}

Submanifold make_sphere(const Vector& center, double radius, double time) {
  const int d = static_cast<int>(center.size());
  if (!(radius > 0)) throw PreconditionError("sphere radius must be positive");
  Submanifold s(d + 1, 2,
                [=](const Vector& z) -> Vector {
                  Vector v(2);
                  v[0] = (z.head(d) - center).squaredNorm() - radius * radius;
                  v[1] = z[d] - time;
                  return v;
                },
                [=](const Vector& z) -> Matrix {
                  Matrix J = Matrix::Zero(2, d + 1);
                  J.block(0, 0, 1, d) = 2.0 * (z.head(d) - center).transpose();
                  J(1, d) = 1.0;
                  return J;
                });
  s.compact = true;
  s.hint = Vector::Zero(d + 1);
  s.hint.head(d) = center;
  s.hint[0] += radius;
  s.hint[d] = time;
  s.label = "sphere";
  return s;
}

Submanifold make_cylinder(const Vector& center, double radius) {
  const int d = static_cast<int>(center.size());
  if (radius < 0) throw PreconditionError("cylinder radius must be nonnegative");
  Submanifold s;
  if (radius == 0.0) {
    s = Submanifold(d + 1, d, [=](const Vector& z) -> Vector { return z.head(d) - center; },
                    [=](const Vector&) -> Matrix {
                      Matrix J = Matrix::Zero(d, d + 1);
                      J.leftCols(d).setIdentity();
                      return J;
                    });
    s.label = "flow line";
  } else {
    s = Submanifold(d + 1, 1,
                    [=](const Vector& z) -> Vector {
                      Vector v(1);
                      v[0] = (z.head(d) - center).squaredNorm() - radius * radius;
                      return v;
                    },
                    [=](const Vector& z) -> Matrix {
                      Matrix J = Matrix::Zero(1, d + 1);
                      J.block(0, 0, 1, d) = 2.0 * (z.head(d) - center).transpose();
                      return J;
                    });
    s.label = "cylinder";
  }
  s.cylindrical = true;
  s.compact = true;
  s.hint = Vector::Zero(d + 1);
  s.hint.head(d) = center;
  s.hint[0] += radius;
  return s;
}

Submanifold make_base_point(const Vector& x) {
  const int d = static_cast<int>(x.size());
  Submanifold s(d, d, [x](const Vector& w) -> Vector { return w - x; },
                [d](const Vector&) -> Matrix { return Matrix::Identity(d, d); });
  s.compact = true;
  s.hint = x;
  s.label = "point";
  return s;
}

Submanifold make_base_sphere(const Vector& center, double radius) {
  const int d = static_cast<int>(center.size());
  if (!(radius > 0)) throw PreconditionError("sphere radius must be positive");
  Submanifold s(d, 1,
                [=](const Vector& x) -> Vector {
                  Vector v(1);
                  v[0] = (x - center).squaredNorm() - radius * radius;
                  return v;
                },
                [=](const Vector& x) -> Matrix { return 2.0 * (x - center).transpose(); });
  s.compact = true;
  s.hint = center;
  s.hint[0] += radius;
  s.label = "sphere";
  return s;
}

Submanifold make_base_plane(const Vector& normal, double offset) {
  Submanifold s = make_plane(normal, offset);
  s.cylindrical = false;
  return s;
}

Submanifold base_of(const Submanifold& cyl) {
  if (!cyl.cylindrical) throw PreconditionError("base_of needs a cylindrical submanifold");
  const int d = cyl.ambient_dim() - 1;
  auto lift = [d](const Vector& x) {
    Vector z = Vector::Zero(d + 1);
    z.head(d) = x;
    return z;
  };
  Submanifold s(d, cyl.codim(), [cyl, lift](const Vector& x) -> Vector { return cyl.value(lift(x)); },
                [cyl, lift, d](const Vector& x) -> Matrix { return cyl.jacobian(lift(x)).leftCols(d); });
  s.compact = cyl.compact;
  if (cyl.hint.size() == d + 1) s.hint = cyl.hint.head(d);
  s.label = cyl.label + " (base)";
  return s;
}

std::string to_string(Hypothesis h) { return h == Hypothesis::H1 ? "H1" : "H2"; }

Sampler make_sampler(const Box& chart, double time_window, int per_axis) {
  const int d = chart.dim();
  Sampler s;
  s.box.lower = Vector(d + 1);
  s.box.upper = Vector(d + 1);
  s.box.lower << chart.lower, -time_window;
  s.box.upper << chart.upper, time_window;
  s.per_axis = per_axis;
  return s;
}

namespace {

std::vector<Vector> grid_points(const Box& box, int per_axis) {
  const int n = box.dim();
  per_axis = std::max(per_axis, 2);
  std::vector<Vector> out;
  std::vector<int> idx(n, 0);
  while (true) {
    Vector z(n);
    for (int k = 0; k < n; ++k) {
      z[k] = box.lower[k] + (box.upper[k] - box.lower[k]) * idx[k] / (per_axis - 1);
    }
    out.push_back(z);
    int k = 0;
    while (k < n && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

std::vector<Vector> sample_on(const Submanifold& sub, const Sampler& sampler) {
  std::vector<Vector> out;
  ProjectionSettings ps;
  ps.tol_on = 1e-9;
  ps.max_iters = 60;
  for (const Vector& z : grid_points(sampler.box, sampler.per_axis)) {
    try {
      Vector p = project(sub, z, ps);
      if (sampler.box.contains(p)) out.push_back(std::move(p));
    } catch (const ProjectionFailed&) {
    }
  }
  return out;
}

}  // namespace

bool verify_cylindrical(const Submanifold& sub, const Sampler& sampler, double tol) {
  const int n = sub.ambient_dim();
  for (const Vector& z : grid_points(sampler.box, sampler.per_axis)) {
    Vector z0 = z;
    z0[n - 1] = 0.0;
    const double scale = std::max(1.0, sub.value(z0).cwiseAbs().maxCoeff());
    if ((sub.value(z) - sub.value(z0)).cwiseAbs().maxCoeff() > tol * scale) return false;
  }
  return true;
}

void validate_boundary_pair(const BoundaryPair& bp, const Sampler& sampler) {
  const int n = sampler.box.dim();
  if (bp.P.ambient_dim() != n || bp.Q.ambient_dim() != n) {
    throw InvalidScenario("boundary submanifolds do not match the spacetime dimension");
  }
  if (bp.hypothesis == Hypothesis::H2) {
    if (!bp.P.cylindrical || !bp.Q.cylindrical) {
      throw InvalidScenario("H2 requires both P and Q to be invariant under the Killing flow");
    }
    if (!verify_cylindrical(bp.P, sampler) || !verify_cylindrical(bp.Q, sampler)) {
      throw InvalidScenario("a submanifold flagged cylindrical depends on t");
    }
    if (!bp.P.compact && !bp.Q.compact) {
      throw InvalidScenario("H2 requires at least one of the base sets to be compact");
    }
  }
  // Alternating projections from a grid of seeds; convergence to a common
  // point means the sets meet.
  ProjectionSettings ps;
  ps.max_iters = 60;
  for (const Vector& seed : grid_points(sampler.box, std::min(sampler.per_axis, 5))) {
    try {
      Vector p = project(bp.P, seed, ps);
      for (int it = 0; it < 30; ++it) {
        const Vector q = project(bp.Q, p, ps);
        const Vector p_next = project(bp.P, q, ps);
        const double gap = (p_next - q).norm();
        p = p_next;
        if (gap <= 1e-7 * (1.0 + q.norm())) {
          throw InvalidScenario("P and Q intersect (P and Q must be disjoint)");
        }
      }
    } catch (const ProjectionFailed&) {
    }
  }
}

OrthogonalityResidual orthogonality_residual_unchecked(const MetricField& m, const SpacetimeCurve& c,
                                                       const BoundaryPair& bp) {
  const auto [p0, p1] = endpoint_momenta(m, c);
  const int N = c.segments();
  auto speed = [&](int seg) {
    const Vector u = N * (stack(c.nodes[seg + 1]) - stack(c.nodes[seg]));
    const Vector mid = 0.5 * (c.nodes[seg].x + c.nodes[seg + 1].x);
    return std::sqrt(std::max(0.0, u.dot(riemannian_matrix(m, mid) * u)));
  };
  auto worst = [](const Matrix& B, const Vector& p) {
    double r = 0.0;
    for (Eigen::Index k = 0; k < B.cols(); ++k) r = std::max(r, std::abs(p.dot(B.col(k))));
    return r;
  };
  OrthogonalityResidual out;
  out.r0 = worst(tangent_basis(bp.P, stack(c.nodes.front())), p0) / (1.0 + speed(0));
  out.r1 = worst(tangent_basis(bp.Q, stack(c.nodes.back())), p1) / (1.0 + speed(N - 1));
  return out;
}

OrthogonalityResidual orthogonality_residual(const MetricField& m, const SpacetimeCurve& c,
                                             const BoundaryPair& bp, double tol_on) {
  if (c.segments() < 1) throw PreconditionError("curve needs at least one segment");
  if (bp.P.value(stack(c.nodes.front())).norm() > tol_on) {
    throw PreconditionError("curve does not start on P");
  }
  if (bp.Q.value(stack(c.nodes.back())).norm() > tol_on) {
    throw PreconditionError("curve does not end on Q");
  }
  return orthogonality_residual_unchecked(m, c, bp);
}

H1Report check_H1(const BoundaryPair& bp, const Sampler& sampler) {
  H1Report r;
  const int n = sampler.box.dim();
  const double t_edge = std::max(std::abs(sampler.box.lower[n - 1]), std::abs(sampler.box.upper[n - 1]));
  if (bp.hypothesis != Hypothesis::H1) r.warnings.push_back("pair is not declared under H1");

  const std::vector<Vector> qs = sample_on(bp.Q, sampler);
  r.Q_samples = static_cast<int>(qs.size());
  for (const Vector& q : qs) r.D_Q = std::max(r.D_Q, std::abs(q[n - 1]));
  r.Q_unbounded = bp.Q.cylindrical || r.D_Q >= 0.9 * t_edge;
  if (r.Q_unbounded) r.warnings.push_back("sup |s_Q| grows with the sampling window; Q looks unbounded in t");
  if (bp.D_Q_bound && r.D_Q > *bp.D_Q_bound + 1e-9) {
    r.warnings.push_back("sampled sup |s_Q| exceeds the declared bound");
  }

  const std::vector<Vector> ps = sample_on(bp.P, sampler);
  r.P_samples = static_cast<int>(ps.size());
  Box inner = sampler.box;
  const Vector margin = 0.05 * (sampler.box.upper - sampler.box.lower);
  inner.lower += margin;
  inner.upper -= margin;
  r.P_bounded = !ps.empty() && std::all_of(ps.begin(), ps.end(), [&](const Vector& p) { return inner.contains(p); });
  for (const Vector& p : ps) r.D_P = std::max(r.D_P, std::abs(p[n - 1]));
  if (!r.P_bounded) r.warnings.push_back("P reaches the edge of the sampling box; compactness is doubtful");
  if (!bp.P.compact) r.warnings.push_back("P is not declared compact");
  if (qs.empty()) r.warnings.push_back("no sample of Q found in the sampling box");
  return r;
}

}  // namespace ngeo
