#ifndef NGEO_SOLVER_HPP
#define NGEO_SOLVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "ngeo/params.hpp"
#include "ngeo/reduction.hpp"
#include "ngeo/submanifold.hpp"

namespace ngeo {

struct Diagnostics {
  ConservationRecord conservation;
  double geodesic_residual = 0.0;
  OrthogonalityResidual orthogonality;
  CausalCharacter character = CausalCharacter::Spacelike;
  double violation_P = 0.0;  // |Phi_P(z(0))|
  double violation_Q = 0.0;  // |Phi_Q(z(1))|
  /// max(1, median g_R(z', z')); geodesic and conservation residuals are
  /// compared against their tolerances after division by this.
  double scale = 1.0;
};

/// Full certification pass over a stored curve, independent of how it was produced.
Diagnostics certify(const MetricField& m, const SpacetimeCurve& c, const BoundaryPair& bp,
                    double tol_causal = kDefaultCausalTolerance);

/// The four certification thresholds plus the endpoint constraints.
bool meets(const Diagnostics& d, const Tolerances& tol);

struct SolveResult {
  SpacetimeCurve curve;
  double J_value = 0.0;
  Diagnostics diagnostics;
  bool converged = false;
  int iterations = 0;
  Hypothesis branch = Hypothesis::H1;
  std::vector<std::string> warnings;
};

class SolveNotFound : public Error {
 public:
  SolveNotFound(const std::string& what, SolveResult best) : Error(what), best(std::move(best)) {}
  SolveResult best;
};

/// Normal geodesic from P to Q. H1: descent on J over (x_0..x_N, t0, t1) with
/// penalized endpoints, then projected polish, multi-start. H2: h1 normal
/// geodesic between the base sets, lifted horizontally from bp.lift_t0.
/// `sampler` bounds the disjointness and H1 checks; by default the chart
/// times [-10, 10].
SolveResult solve_normal_geodesic(const MetricField& m, const BoundaryPair& bp, const SolveParams& params,
                                  const std::optional<Sampler>& sampler = std::nullopt);

/// Upsamples to N * factor segments and re-polishes. On failure the original
/// is returned with a warning appended.
SolveResult refine(const MetricField& m, const BoundaryPair& bp, const SolveResult& result, int factor,
                   const SolveParams& params);

struct VariationCheck {
  double max_abs = 0.0;      // over all sampled variations
  double max_killing = 0.0;  // over the mu K variations only
};

/// Largest |df(z)[zeta]| over `samples` random admissible variations of unit
/// discrete H1(g_R) norm; half of them are mu K with mu vanishing at the ends.
VariationCheck variational_principle_check(const MetricField& m, const SpacetimeCurve& c, const BoundaryPair& bp,
                                           int samples, std::uint64_t seed = 1);

}  // namespace ngeo

#endif  // NGEO_SOLVER_HPP
