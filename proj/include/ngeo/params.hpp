#ifndef NGEO_PARAMS_HPP
#define NGEO_PARAMS_HPP

#include <cstdint>
#include <vector>

namespace ngeo {

/// Backtracking (Armijo) line search.
struct StepRule {
  double initial_step = 1.0;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 60;
};

/// Certification thresholds. Residuals are compared at unit scale: the
/// orthogonality residual is self-normalized, the others are divided by
/// max(1, g_R energy scale of the curve).
struct Tolerances {
  double geo = 1e-5;
  double cons = 1e-5;
  double orth = 1e-5;
  double on = 1e-9;
  double causal = 1e-6;
};

struct SolveParams {
  int N = 64;
  int max_iters = 2000;  // per descent phase
  double grad_tol = 1e-9;
  std::vector<double> penalty_schedule{10.0, 100.0, 1e3, 1e4};
  int restarts = 4;
  std::uint64_t seed = 1;
  double restart_noise = 0.25;  // std. deviation of endpoint/Delta perturbations
  StepRule step;
  Tolerances tol;
  bool parallel = true;

  /// Throws PreconditionError when an invariant is violated.
  void validate() const;
};

}  // namespace ngeo

#endif  // NGEO_PARAMS_HPP
