#ifndef NGEO_DESCENT_HPP
#define NGEO_DESCENT_HPP

#include <Eigen/Sparse>

#include <functional>
#include <vector>

#include "ngeo/params.hpp"
#include "ngeo/submanifold.hpp"

namespace ngeo {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// A group of variables forming one endpoint, constrained to a submanifold.
struct EndpointBlock {
  std::vector<int> index;
  const Submanifold* sub = nullptr;
};

/// Smooth objective over a flat variable vector. `objective` may throw
/// DomainError for infeasible points; the line search then backtracks.
struct DescentProblem {
  std::function<double(const Vector& theta, Vector* grad)> objective;
  /// SPD inner product defining the gradient (Sobolev-type for curves).
  SparseMatrix metric;
  std::vector<EndpointBlock> ends;
};

struct DescentStats {
  int iterations = 0;
  bool converged = false;
  double value = 0.0;
  double grad_norm = 0.0;  // dual norm of the gradient in `metric`
};

/// Minimizes objective + mu * sum |Phi_e|^2 by preconditioned gradient descent.
/// The preconditioner adds the Gauss-Newton term of the penalty to `metric`.
DescentStats penalty_descent(const DescentProblem& p, Vector& theta, double mu, int max_iters,
                             double grad_tol, const StepRule& rule);

/// Endpoint blocks are projected onto their submanifolds, then moved only
/// along tangent directions and retracted by projection after every step.
DescentStats projected_descent(const DescentProblem& p, Vector& theta, int max_iters, double grad_tol,
                               const StepRule& rule, const ProjectionSettings& proj);

/// Discrete H1 inner product on N+1 nodes of dimension d (stiffness plus a
/// small mass term), followed by `extra` unit-weight scalar variables.
SparseMatrix curve_metric(int N, int d, int extra = 0, double mass = 1e-3);

/// Largest constraint violation over the endpoint blocks.
double endpoint_violation(const DescentProblem& p, const Vector& theta);

}  // namespace ngeo

#endif  // NGEO_DESCENT_HPP
