#ifndef NGEO_REDUCTION_HPP
#define NGEO_REDUCTION_HPP

#include <vector>

#include "ngeo/spacetime.hpp"

namespace ngeo {

/// Spatial nodes at s_i = i/N.
struct SpatialCurve {
  std::vector<Vector> nodes;

  int segments() const { return static_cast<int>(nodes.size()) - 1; }
  int dim() const { return nodes.empty() ? 0 : static_cast<int>(nodes.front().size()); }
};

/// Coordinates on the Killing-constrained curve space: spatial curve, initial
/// time, and time gap t(1) - t(0).
struct ReducedState {
  SpatialCurve x;
  double t0 = 0.0;
  double Delta = 0.0;
};

struct ConservationRecord {
  double C_z = 0.0;
  double max_deviation = 0.0;  // sup |g(z', K) - C_z| over segments
  double E_z = 0.0;
  double E_deviation = 0.0;    // sup |g(z', z') - E_z| over segments
};

/// Composite midpoint-rule integrals along a piecewise linear spatial curve,
/// fields evaluated at segment midpoints with the segment velocity:
///   energy     = int g0[x', x']
///   drift      = int g0~[delta, x']          (g0~ = g0 / beta)
///   drift_sq   = int g0~[delta, x'] g0[delta, x']
///   inv_beta   = int 1 / beta
struct ReducedIntegrals {
  double energy = 0.0;
  double drift = 0.0;
  double drift_sq = 0.0;
  double inv_beta = 0.0;
};

ReducedIntegrals reduced_integrals(const MetricField& m, const SpatialCurve& x);

/// Conserved Killing product of the constrained curve with spatial part x and time gap Delta.
double compute_Cz(const MetricField& m, const SpatialCurve& x, double Delta);

/// Integrates t' = g0~[delta, x'] - C_z / beta from t(0) = t0, one midpoint
/// step per segment; t(1) - t(0) = Delta up to rounding.
SpacetimeCurve reconstruct_t(const MetricField& m, const ReducedState& rs);

/// Energy functional restricted to the Killing-constrained curves.
double eval_J(const MetricField& m, const SpatialCurve& x, double Delta);

struct JGradient {
  std::vector<Vector> nodes;  // dJ/dx_i for i = 0..N, endpoints included
  double dDelta = 0.0;
  double value = 0.0;
};

/// Exact gradient of the discrete eval_J.
JGradient grad_J(const MetricField& m, const SpatialCurve& x, double Delta);

/// f(z) = 1/2 int g(z', z'), midpoint rule.
double eval_f(const MetricField& m, const SpacetimeCurve& c);

/// Exact gradient of the discrete eval_f with respect to every node (x, t).
std::vector<Vector> grad_f(const MetricField& m, const SpacetimeCurve& c);

ConservationRecord conservation_record(const MetricField& m, const SpacetimeCurve& c);

SpatialCurve spatial_part(const SpacetimeCurve& c);
double delta_z(const SpacetimeCurve& c);
ReducedState reduced_state(const SpacetimeCurve& c);

}  // namespace ngeo

#endif  // NGEO_REDUCTION_HPP
