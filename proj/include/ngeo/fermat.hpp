#ifndef NGEO_FERMAT_HPP
#define NGEO_FERMAT_HPP

#include "ngeo/curve_energy.hpp"
#include "ngeo/params.hpp"
#include "ngeo/reduction.hpp"
#include "ngeo/spacetime.hpp"

namespace ngeo {

/// Future: arrival times of future-pointing lightlike curves; Past: past-pointing.
enum class Side { Future, Past };

std::string to_string(Side s);

/// Randers metric F(x, y) = sqrt(h(x)[y, y]) + omega(x)[y] on M0 with
///   h = (g0~[delta, .])^2 + g0~,   omega = +/- g0~[delta, .],   g0~ = g0 / beta.
class FermatStructure {
 public:
  FermatStructure(MetricField base, Side side);

  const MetricField& base() const { return base_; }
  Side side() const { return side_; }
  double sign() const { return side_ == Side::Future ? 1.0 : -1.0; }

  Matrix h(const Vector& x) const;
  /// The one-form as a column vector.
  Vector omega(const Vector& x) const;
  /// sqrt(omega^T h^-1 omega); below 1 for a Randers metric.
  double omega_norm(const Vector& x) const;

  /// Checks admissibility (h positive definite, |omega| < 1) on a chart grid.
  void validate(int per_axis = 10) const;

 private:
  MetricField base_;
  Side side_;
};

double F(const FermatStructure& fs, const Vector& x, const Vector& y);

/// Midpoint-rule Finsler length along the polygon.
double fermat_length(const FermatStructure& fs, const SpatialCurve& x);

/// Time gap of a lightlike curve over x: +length (Future) or -length (Past).
double arrival_time(const FermatStructure& fs, const SpatialCurve& x);

/// Lightlike curve over x starting at t0, future- or past-pointing according to the side.
SpacetimeCurve lightlike_lift(const FermatStructure& fs, const SpatialCurve& x, double t0);

/// The two roots in Delta of J(x, Delta) = 0.
double T_tilde(const MetricField& m, const SpatialCurve& x, Side side);

struct StimoCheck {
  bool holds = false;
  double slack = 0.0;  // min of T~+ - T+ and T- - T~-
};

/// Arrival times against their J-root counterparts: T+ <= T~+ and T~- <= T-.
StimoCheck check_stimo(const MetricField& m, const SpatialCurve& x);

class NoEstimate : public Error {
 public:
  using Error::Error;
};

struct FermatDistance {
  double value = 0.0;
  SpatialCurve curve;
  int restarts_converged = 0;
};

/// Variational upper bound on the Finsler distance from p to q: the shortest
/// multi-start minimizer of the discrete energy int F^2 / 2.
FermatDistance fermat_distance(const FermatStructure& fs, const Vector& p, const Vector& q,
                               const SolveParams& params);

/// L(x, v) = F(x, v)^2 / 2.
CurveLagrangian fermat_lagrangian(const FermatStructure& fs);

}  // namespace ngeo

#endif  // NGEO_FERMAT_HPP
