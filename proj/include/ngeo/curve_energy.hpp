#ifndef NGEO_CURVE_ENERGY_HPP
#define NGEO_CURVE_ENERGY_HPP

#include <functional>
#include <optional>

#include "ngeo/params.hpp"
#include "ngeo/reduction.hpp"
#include "ngeo/submanifold.hpp"

namespace ngeo {

struct LagrangianTerms {
  double value = 0.0;
  Vector d_v;  // gradient in the velocity
  Vector d_x;  // gradient in the position
};

/// Energy density L(x, v); the discrete energy is sum_i L(mid_i, v_i) / N.
/// Must throw DomainError outside its chart.
using CurveLagrangian = std::function<LagrangianTerms(const Vector& x, const Vector& v, bool with_gradient)>;

/// SPD matrix field on a chart of R^d, with optional exact derivative.
struct MatrixField {
  int dim = 0;
  std::function<Matrix(const Vector&)> value;
  std::function<std::vector<Matrix>(const Vector&)> derivative;
  Box chart;
  double fd_step = 1e-5;

  Matrix at(const Vector& x) const;
  std::vector<Matrix> derivative_at(const Vector& x) const;
};

/// L(x, v) = A(x)[v, v] / 2.
CurveLagrangian riemannian_lagrangian(const MatrixField& A);

double discrete_energy(const CurveLagrangian& L, const SpatialCurve& x);

struct CurveEnergyResult {
  SpatialCurve curve;
  double energy = 0.0;
  bool converged = false;
  int iterations = 0;
  double grad_norm = 0.0;
  double violation = 0.0;  // max endpoint |Phi|
};

/// Discrete minimizer of the curve energy with x(0) on `start` and x(1) on
/// `end` (points give fixed endpoints): penalty phases over the schedule,
/// then projected polish.
CurveEnergyResult minimize_curve_energy(const CurveLagrangian& L, const Submanifold& start,
                                        const Submanifold& end, const SpatialCurve& initial,
                                        const SolveParams& params);

/// Straight chord between the projections of the two hints, N segments.
SpatialCurve initial_chord(const Submanifold& start, const Submanifold& end, int N);

CurveEnergyResult minimize_riemannian_energy(const MatrixField& A, const Submanifold& start,
                                             const Submanifold& end, const SolveParams& params,
                                             const std::optional<SpatialCurve>& initial = std::nullopt);
CurveEnergyResult minimize_riemannian_energy(const MatrixField& A, const Vector& p, const Vector& q,
                                             const SolveParams& params);

/// Max over interior nodes of |x'' + Gamma(x', x')|_A, central differences.
double riemannian_geodesic_residual(const MatrixField& A, const SpatialCurve& x);

/// Endpoint orthogonality in the metric A, normalized as for spacetime curves.
OrthogonalityResidual riemannian_orthogonality(const MatrixField& A, const SpatialCurve& x,
                                               const Submanifold& start, const Submanifold& end);

}  // namespace ngeo

#endif  // NGEO_CURVE_ENERGY_HPP
