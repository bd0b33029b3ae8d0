#ifndef NGEO_SUBMANIFOLD_HPP
#define NGEO_SUBMANIFOLD_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ngeo/spacetime.hpp"

namespace ngeo {

inline constexpr double kDefaultOnTolerance = 1e-9;

/// Level set {Phi = 0} of a map Phi: R^n -> R^k. For spacetime submanifolds
/// n = d + 1 and coordinates are (x, t); base submanifolds of M0 have n = d.
class Submanifold {
 public:
  using Constraint = std::function<Vector(const Vector&)>;
  using Jacobian = std::function<Matrix(const Vector&)>;

  Submanifold() = default;
  /// An empty `jacobian` selects central differences.
  Submanifold(int ambient_dim, int codim, Constraint phi, Jacobian jacobian = {});

  int ambient_dim() const { return ambient_dim_; }
  int codim() const { return codim_; }
  int dim() const { return ambient_dim_ - codim_; }

  Vector value(const Vector& z) const;
  Matrix jacobian(const Vector& z) const;

  /// Phi does not depend on t (the set is a union of Killing flow lines).
  bool cylindrical = false;
  /// Author's assertion that the set (or its base, when cylindrical) is compact.
  bool compact = false;
  /// A point near the set, used to seed projections.
  Vector hint;
  std::string label;

 private:
  int ambient_dim_ = 0;
  int codim_ = 0;
  Constraint phi_;
  Jacobian jacobian_;
};

/// Thrown by project(); carries the last Gauss-Newton iterate.
class ProjectionFailed : public Error {
 public:
  ProjectionFailed(const std::string& what, Vector last) : Error(what), last_iterate(std::move(last)) {}
  Vector last_iterate;
};

struct ProjectionSettings {
  double tol_on = kDefaultOnTolerance;
  int max_iters = 100;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) on |Phi|^2/2 starting at z.
Vector project(const Submanifold& sub, const Vector& z, const ProjectionSettings& s = {});
SpacetimePoint project(const Submanifold& sub, const SpacetimePoint& p,
                       const ProjectionSettings& s = {});

/// Euclidean-orthonormal basis of ker(dPhi) at z, as columns. For cylindrical
/// spacetime submanifolds the first column is d/dt.
Matrix tangent_basis(const Submanifold& sub, const Vector& z);
std::vector<TangentVector> tangent_basis(const Submanifold& sub, const SpacetimePoint& p);

// Built-in shapes in spacetime (coordinates (x, t)).
Submanifold make_point(const SpacetimePoint& p);
/// {n . (x, t) = offset}; `normal` has d + 1 entries.
Submanifold make_plane(const Vector& normal, double offset);
/// {|x - c| = r, t = time}, codimension 2.
Submanifold make_sphere(const Vector& center, double radius, double time);
/// {|x - c| = r} x R. A zero radius gives the flow line through c.
Submanifold make_cylinder(const Vector& center, double radius);

// Built-in shapes in the base M0.
Submanifold make_base_point(const Vector& x);
Submanifold make_base_sphere(const Vector& center, double radius);
Submanifold make_base_plane(const Vector& normal, double offset);

/// Base set P_S of a cylindrical P = Psi(R x P_S), as a submanifold of M0.
Submanifold base_of(const Submanifold& cylindrical);

enum class Hypothesis { H1, H2 };
std::string to_string(Hypothesis h);

struct BoundaryPair {
  Submanifold P;
  Submanifold Q;
  Hypothesis hypothesis = Hypothesis::H1;
  std::optional<double> D_Q_bound;
  /// Starting time of the horizontal lift on the H2 route.
  double lift_t0 = 0.0;
};

/// Region of spacetime explored by sampling checks: the spatial chart times a
/// time window.
struct Sampler {
  Box box;  // d + 1 dimensional, t last
  int per_axis = 7;
};

Sampler make_sampler(const Box& chart, double time_window, int per_axis = 7);

/// Sampled check that Phi(x, t) = Phi(x, 0).
bool verify_cylindrical(const Submanifold& sub, const Sampler& sampler, double tol = 1e-10);

/// Checks the pair: dimensions, disjointness at sampled resolution, and for H2
/// cylindrical sets with at least one compact base. Throws InvalidScenario.
void validate_boundary_pair(const BoundaryPair& bp, const Sampler& sampler);

struct OrthogonalityResidual {
  double r0 = 0.0;
  double r1 = 0.0;
};

/// Normalized |g(z'(0), v)| over the tangent basis of P at z(0) and likewise at
/// z(1) for Q. Requires the endpoints on P and Q within `tol_on`.
OrthogonalityResidual orthogonality_residual(const MetricField& m, const SpacetimeCurve& c,
                                             const BoundaryPair& bp,
                                             double tol_on = kDefaultOnTolerance);
/// Same quantity without the endpoint precondition (used for certification).
OrthogonalityResidual orthogonality_residual_unchecked(const MetricField& m,
                                                       const SpacetimeCurve& c,
                                                       const BoundaryPair& bp);

struct H1Report {
  double D_Q = 0.0;          // estimated sup |s_Q|
  bool Q_unbounded = false;  // samples reached the time window edge
  double D_P = 0.0;          // estimated sup |s_P|
  bool P_bounded = false;    // P samples stay away from the sampling box faces
  int Q_samples = 0;
  int P_samples = 0;
  std::vector<std::string> warnings;
};

/// Advisory sampling estimate of the (H1) quantities. Never throws on
/// violation; problems are reported as warnings.
H1Report check_H1(const BoundaryPair& bp, const Sampler& sampler);

}  // namespace ngeo

#endif  // NGEO_SUBMANIFOLD_HPP
