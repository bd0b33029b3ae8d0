#ifndef NGEO_SPACETIME_HPP
#define NGEO_SPACETIME_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ngeo/types.hpp"

namespace ngeo {

/// Values and first spatial derivatives of (g0, delta, beta) at one point.
struct FieldJet {
  Matrix g0;
  Vector delta;
  double beta = 1.0;
  std::vector<Matrix> d_g0;  // d_g0[k] = d g0 / d x_k
  Matrix d_delta;            // column k = d delta / d x_k
  Vector d_beta;
};

/// Spatial data of a standard stationary metric on M0 x R,
///
///   g(x,t)[(y,tau),(y,tau)] = g0(x)[y,y] + 2 g0(x)[delta(x),y] tau - beta(x) tau^2,
///
/// with Killing field K = d/dt. Derivative callbacks are optional; when absent
/// the derivatives are taken by central differences with step `fd_step`.
struct MetricField {
  int dim = 0;
  std::function<Matrix(const Vector&)> g0;
  std::function<Vector(const Vector&)> delta;
  std::function<double(const Vector&)> beta;
  Box chart;

  std::function<std::vector<Matrix>(const Vector&)> d_g0;
  std::function<Matrix(const Vector&)> d_delta;
  std::function<Vector(const Vector&)> d_beta;
  double fd_step = 1e-5;

  /// Throws DomainError when x is not in the chart.
  void require_in_chart(const Vector& x) const;

  FieldJet values(const Vector& x) const;
  FieldJet jet(const Vector& x) const;

  /// (d+1)x(d+1) matrix of g in coordinates (x, t), t last.
  Matrix full_metric(const Vector& x) const;
  /// d matrices: spatial derivatives of full_metric.
  std::vector<Matrix> full_metric_derivative(const Vector& x) const;

  /// Checks symmetry, positive definiteness of g0 and beta > 0 on a grid of
  /// `per_axis`^d chart points. Throws ModelError on the first failure.
  void validate(int per_axis = 10) const;
};

struct SpacetimePoint {
  Vector x;
  double t = 0.0;
};

struct TangentVector {
  Vector y;
  double tau = 0.0;
};

/// Nodes at s_i = i/N, i = 0..N.
struct SpacetimeCurve {
  std::vector<SpacetimePoint> nodes;

  int segments() const { return static_cast<int>(nodes.size()) - 1; }
  int dim() const { return nodes.empty() ? 0 : static_cast<int>(nodes.front().x.size()); }
};

enum class CausalCharacter { Timelike, Lightlike, Spacelike, CausalBoundary };

std::string to_string(CausalCharacter c);
std::optional<CausalCharacter> causal_character_from_string(const std::string& s);

/// Stack (x, t) into one (d+1) vector and back.
Vector stack(const SpacetimePoint& p);
Vector stack(const TangentVector& v);
SpacetimePoint unstack_point(const Vector& z);
TangentVector unstack_vector(const Vector& z);

double eval_g(const MetricField& m, const SpacetimePoint& p, const TangentVector& v,
              const TangentVector& w);

/// Auxiliary Riemannian metric g_R = g - 2 g(.,K) g(.,K) / g(K,K).
double eval_gR(const MetricField& m, const SpacetimePoint& p, const TangentVector& v,
               const TangentVector& w);

/// g_R as a matrix in (x, t) coordinates.
Matrix riemannian_matrix(const MetricField& m, const Vector& x);

SpacetimePoint killing_flow(const SpacetimePoint& p, double s);

/// Flow parameter bringing p onto S = M0 x {0}.
double s_R(const SpacetimePoint& p);

/// Gamma[k](i, j) = Christoffel symbol Gamma^k_{ij}.
struct Christoffel {
  std::vector<Matrix> gamma;

  int dim() const { return static_cast<int>(gamma.size()); }
  double operator()(int k, int i, int j) const { return gamma[k](i, j); }
  /// Gamma^k(v, w) for every k.
  Vector contract(const Vector& v, const Vector& w) const;
};

/// Levi-Civita symbols of a metric matrix G given with its coordinate
/// derivatives; coordinates beyond dG.size() are treated as cyclic.
Christoffel christoffel_from(const Matrix& G, const std::vector<Matrix>& dG);

Christoffel christoffel(const MetricField& m, const SpacetimePoint& p);

/// Max over interior nodes of |z'' + Gamma(z', z')|_{g_R}, central differences.
double geodesic_residual(const MetricField& m, const SpacetimeCurve& c);

/// g(z', z') on each segment, segment velocity and midpoint metric.
std::vector<double> segment_energies(const MetricField& m, const SpacetimeCurve& c);
/// g(z', K) on each segment.
std::vector<double> segment_killing_products(const MetricField& m, const SpacetimeCurve& c);

/// Median g_R(z', z') over segments; the scale used by relative tolerances.
double gR_energy_scale(const MetricField& m, const SpacetimeCurve& c);

struct EnergyCharacter {
  double E = 0.0;
  CausalCharacter character = CausalCharacter::Spacelike;
};

inline constexpr double kDefaultCausalTolerance = 1e-6;

EnergyCharacter energy_and_character(const MetricField& m, const SpacetimeCurve& c,
                                     double tol_causal = kDefaultCausalTolerance);

/// Discrete momenta at the two ends of a curve: the covectors g(z'(0), .) and
/// g(z'(1), .) obtained from the midpoint Lagrangian (second-order accurate).
/// They coincide with minus/plus the end-node gradients of the discrete energy.
std::pair<Vector, Vector> endpoint_momenta(const MetricField& m, const SpacetimeCurve& c);

double median(std::vector<double> values);

}  // namespace ngeo

#endif  // NGEO_SPACETIME_HPP
