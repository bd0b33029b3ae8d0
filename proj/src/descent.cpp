#include "ngeo/descent.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>

namespace ngeo {

namespace {

Vector gather(const Vector& theta, const std::vector<int>& idx) {
  Vector z(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) z[i] = theta[idx[i]];
  return z;
}

void scatter(Vector& theta, const std::vector<int>& idx, const Vector& z) {
  for (std::size_t i = 0; i < idx.size(); ++i) theta[idx[i]] = z[i];
}

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const std::function<double(const Vector&)>& f, const Vector& theta) {
  try {
    const double v = f(theta);
    return std::isfinite(v) ? v : kInf;
  } catch (const DomainError&) {
    return kInf;
  }
}

bool negligible_decrease(double dec, double f) { return -dec <= 1e-13 * (1.0 + std::abs(f)); }

// Below rounding resolution Armijo cannot be tested; a full step that does not
// increase the objective is still taken so the gradient keeps shrinking.
bool rounding_step(int backtrack, double ft, double f, double dec) {
  return backtrack == 0 && negligible_decrease(dec, f) && ft <= f;
}

Vector solve_spd(const SparseMatrix& M, const Vector& rhs) {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(M);
  if (ldlt.info() != Eigen::Success) throw ModelError("descent preconditioner is not positive definite");
  return ldlt.solve(rhs);
}

}  // namespace

SparseMatrix curve_metric(int N, int d, int extra, double mass) {
  const int n = (N + 1) * d + extra;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(4 * N * d + n);
  for (int i = 0; i < N; ++i) {
    for (int c = 0; c < d; ++c) {
      const int a = i * d + c;
      const int b = (i + 1) * d + c;
      t.emplace_back(a, a, N);
      t.emplace_back(b, b, N);
      t.emplace_back(a, b, -N);
      t.emplace_back(b, a, -N);
    }
  }
  for (int i = 0; i < (N + 1) * d; ++i) t.emplace_back(i, i, mass / N);
  for (int i = (N + 1) * d; i < n; ++i) t.emplace_back(i, i, 1.0);
  SparseMatrix M(n, n);
  M.setFromTriplets(t.begin(), t.end());
  return M;
}

double endpoint_violation(const DescentProblem& p, const Vector& theta) {
  double worst = 0.0;
  for (const auto& e : p.ends) worst = std::max(worst, e.sub->value(gather(theta, e.index)).norm());
  return worst;
}

DescentStats penalty_descent(const DescentProblem& p, Vector& theta, double mu, int max_iters,
                             double grad_tol, const StepRule& rule) {
  const auto n = theta.size();
  auto total = [&](const Vector& th, Vector* grad) {
    double f = p.objective(th, grad);
    for (const auto& e : p.ends) {
      const Vector z = gather(th, e.index);
      const Vector phi = e.sub->value(z);
      f += mu * phi.squaredNorm();
      if (grad) {
        const Vector gz = 2.0 * mu * e.sub->jacobian(z).transpose() * phi;
        for (std::size_t i = 0; i < e.index.size(); ++i) (*grad)[e.index[i]] += gz[i];
      }
    }
    return f;
  };
  const std::function<double(const Vector&)> value_only = [&](const Vector& th) { return total(th, nullptr); };

  DescentStats stats;
  int stalled = 0;
  for (int it = 0; it < max_iters; ++it) {
    Vector g = Vector::Zero(n);
    const double f = total(theta, &g);
    stats.value = f;

    SparseMatrix M = p.metric;
    std::vector<Eigen::Triplet<double>> extra;
    for (const auto& e : p.ends) {
      const Matrix J = e.sub->jacobian(gather(theta, e.index));
      const Matrix H = 2.0 * mu * J.transpose() * J;
      for (std::size_t a = 0; a < e.index.size(); ++a)
        for (std::size_t b = 0; b < e.index.size(); ++b) extra.emplace_back(e.index[a], e.index[b], H(a, b));
    }
    SparseMatrix E(n, n);
    E.setFromTriplets(extra.begin(), extra.end());
    M += E;

    const Vector dir = -solve_spd(M, g);
    const double dec = g.dot(dir);
    stats.grad_norm = std::sqrt(std::max(0.0, -dec));
    if (stats.grad_norm <= grad_tol) {
      stats.converged = true;
      return stats;
    }
    double alpha = rule.initial_step;
    bool accepted = false;
    for (int b = 0; b < rule.max_backtracks; ++b) {
      const Vector trial = theta + alpha * dir;
      const double ft = safe_eval(value_only, trial);
      if (ft <= f + rule.sufficient_decrease * alpha * dec || rounding_step(b, ft, f, dec)) {
        theta = trial;
        stats.value = ft;
        accepted = true;
        break;
      }
      alpha *= rule.shrink;
    }
    ++stats.iterations;
    stalled = negligible_decrease(dec, f) ? stalled + 1 : 0;
    if (!accepted || stalled > 25) {
      stats.converged = negligible_decrease(dec, f);
      return stats;
    }
  }
  return stats;
}

DescentStats projected_descent(const DescentProblem& p, Vector& theta, int max_iters, double grad_tol,
                               const StepRule& rule, const ProjectionSettings& proj) {
  const int n = static_cast<int>(theta.size());
  DescentStats stats;
  try {
    for (const auto& e : p.ends) scatter(theta, e.index, project(*e.sub, gather(theta, e.index), proj));
  } catch (const ProjectionFailed&) {
    return stats;
  }

  std::vector<int> owner(n, -1);
  for (std::size_t k = 0; k < p.ends.size(); ++k)
    for (int i : p.ends[k].index) owner[i] = static_cast<int>(k);

  auto retract = [&](Vector& th) {
    for (const auto& e : p.ends) scatter(th, e.index, project(*e.sub, gather(th, e.index), proj));
  };
  const std::function<double(const Vector&)> value_only = [&](const Vector& th) { return p.objective(th, nullptr); };

  int stalled = 0;
  for (int it = 0; it < max_iters; ++it) {
    Vector g = Vector::Zero(n);
    const double f = p.objective(theta, &g);
    stats.value = f;

    // Tangent parametrization: free variables keep their own column, each
    // endpoint block contributes its tangent basis.
    std::vector<Eigen::Triplet<double>> tt;
    int col = 0;
    for (int i = 0; i < n; ++i)
      if (owner[i] < 0) tt.emplace_back(i, col++, 1.0);
    for (const auto& e : p.ends) {
      const Matrix B = tangent_basis(*e.sub, gather(theta, e.index));
      for (Eigen::Index c = 0; c < B.cols(); ++c, ++col)
        for (std::size_t r = 0; r < e.index.size(); ++r)
          if (B(r, c) != 0.0) tt.emplace_back(e.index[r], col, B(r, c));
    }
    if (col == 0) {
      stats.converged = true;
      return stats;
    }
    SparseMatrix T(n, col);
    T.setFromTriplets(tt.begin(), tt.end());
    const SparseMatrix Mred = SparseMatrix(T.transpose() * p.metric * T);
    const Vector gred = T.transpose() * g;
    const Vector dred = -solve_spd(Mred, gred);
    const Vector dir = T * dred;
    const double dec = gred.dot(dred);
    stats.grad_norm = std::sqrt(std::max(0.0, -dec));
    if (stats.grad_norm <= grad_tol) {
      stats.converged = true;
      return stats;
    }
    double alpha = rule.initial_step;
    bool accepted = false;
    for (int b = 0; b < rule.max_backtracks; ++b) {
      Vector trial = theta + alpha * dir;
      double ft = kInf;
      try {
        retract(trial);
        ft = safe_eval(value_only, trial);
      } catch (const ProjectionFailed&) {
      }
      if (ft <= f + rule.sufficient_decrease * alpha * dec || rounding_step(b, ft, f, dec)) {
        theta = trial;
        stats.value = ft;
        accepted = true;
        break;
      }
      alpha *= rule.shrink;
    }
    ++stats.iterations;
    stalled = negligible_decrease(dec, f) ? stalled + 1 : 0;
    if (!accepted || stalled > 25) {
      stats.converged = negligible_decrease(dec, f);
      return stats;
    }
  }
  return stats;
}

}  // namespace ngeo
