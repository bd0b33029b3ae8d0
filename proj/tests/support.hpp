#ifndef NGEO_TESTS_SUPPORT_HPP
#define NGEO_TESTS_SUPPORT_HPP

#include <cmath>
#include <numbers>
#include <random>

#include "ngeo/reduction.hpp"
#include "ngeo/scenarios.hpp"

namespace ngeo::test {

inline Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

inline TangentVector tv(double a, double b, double tau) { return {v2(a, b), tau}; }
inline SpacetimePoint sp(double a, double b, double t) { return {v2(a, b), t}; }

inline SpatialCurve straight(const Vector& p, const Vector& q, int N) {
  SpatialCurve x;
  x.nodes.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double s = static_cast<double>(i) / N;
    x.nodes[i] = (1 - s) * p + s * q;
  }
  return x;
}

inline SpacetimeCurve straight(const SpacetimePoint& p, const SpacetimePoint& q, int N) {
  SpacetimeCurve c;
  c.nodes.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double s = static_cast<double>(i) / N;
    c.nodes[i] = {(1 - s) * p.x + s * q.x, (1 - s) * p.t + s * q.t};
  }
  return c;
}

/// Smooth random planar curve inside the disk of radius 2: a chord between
/// points of radius <= 1.4 plus three sine modes of amplitude <= 0.2.
inline SpatialCurve random_curve(std::mt19937_64& rng, int N) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vector p = 1.0 * v2(u(rng), u(rng));
  const Vector q = 1.0 * v2(u(rng), u(rng));
  Vector modes[3];
  for (auto& m : modes) m = 0.2 * v2(u(rng), u(rng));
  SpatialCurve x;
  x.nodes.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double s = static_cast<double>(i) / N;
    x.nodes[i] = (1 - s) * p + s * q;
    for (int k = 0; k < 3; ++k) x.nodes[i] += std::sin((k + 1) * std::numbers::pi * s) * modes[k];
  }
  return x;
}

inline ReducedState random_state(std::mt19937_64& rng, int N) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ReducedState rs;
  rs.x = random_curve(rng, N);
  rs.t0 = 2.0 * u(rng);
  rs.Delta = 2.0 * u(rng);
  return rs;
}

/// Same curve sampled at N nodes via a fixed smooth map s -> x(s).
template <class Map>
SpatialCurve sample(Map map, int N) {
  SpatialCurve x;
  x.nodes.resize(N + 1);
  for (int i = 0; i <= N; ++i) x.nodes[i] = map(static_cast<double>(i) / N);
  return x;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace ngeo::test

#endif  // NGEO_TESTS_SUPPORT_HPP
