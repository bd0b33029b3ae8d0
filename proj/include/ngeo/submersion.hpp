#ifndef NGEO_SUBMERSION_HPP
#define NGEO_SUBMERSION_HPP

#include "ngeo/curve_energy.hpp"
#include "ngeo/params.hpp"
#include "ngeo/reduction.hpp"
#include "ngeo/spacetime.hpp"
#include "ngeo/submanifold.hpp"

namespace ngeo {

/// Metric on M0 making (x, t) -> x a Lorentzian submersion:
///   h1[v, v] = g0[v, v] + g0[delta, v]^2 / beta.
struct BaseMetric {
  MetricField source;

  Matrix h1(const Vector& x) const;
  std::vector<Matrix> h1_derivative(const Vector& x) const;
  MatrixField field() const;
};

double eval_h1(const BaseMetric& bm, const Vector& x, const Vector& v, const Vector& w);

struct BaseGeodesic {
  SpatialCurve curve;
  double energy = 0.0;
  double geodesic_residual = 0.0;  // divided by max(1, h1 speed^2)
  OrthogonalityResidual orthogonality;
  bool converged = false;
  int iterations = 0;
};

class NoGeodesicFound : public Error {
 public:
  NoGeodesicFound(const std::string& what, BaseGeodesic best) : Error(what), best(std::move(best)) {}
  BaseGeodesic best;
};

/// Multi-start h1-energy minimization between two disjoint base sets. The
/// lowest-energy certified run wins; throws NoGeodesicFound otherwise.
BaseGeodesic riemannian_normal_geodesic(const BaseMetric& bm, const Submanifold& P_S, const Submanifold& Q_S,
                                        const SolveParams& params);

/// Certifies a base curve against P_S and Q_S.
BaseGeodesic certify_base(const BaseMetric& bm, const SpatialCurve& x, const Submanifold& P_S,
                          const Submanifold& Q_S, const Tolerances& tol);

/// t' = g0[delta, x'] / beta per segment, from t(0) = t0.
SpacetimeCurve horizontal_lift(const BaseMetric& bm, const SpatialCurve& x, double t0);

double lift_is_geodesic_check(const MetricField& m, const SpacetimeCurve& c);

}  // namespace ngeo

#endif  // NGEO_SUBMERSION_HPP
