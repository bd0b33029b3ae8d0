#include "ngeo/scenarios.hpp"

#include <algorithm>

namespace ngeo {

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Box square(double half) { return Box{vec2(-half, -half), vec2(half, half)}; }

// g0 = I in every builtin; only delta and beta vary.
MetricField flat_base(const Box& chart) {
  MetricField m;
  m.dim = 2;
  m.chart = chart;
  m.g0 = [](const Vector&) -> Matrix { return Matrix::Identity(2, 2); };
  m.d_g0 = [](const Vector&) { return std::vector<Matrix>(2, Matrix::Zero(2, 2)); };
  return m;
}

MetricField minkowski() {
  MetricField m = flat_base(square(4.0));
  m.delta = [](const Vector&) -> Vector { return Vector::Zero(2); };
  m.d_delta = [](const Vector&) -> Matrix { return Matrix::Zero(2, 2); };
  m.beta = [](const Vector&) { return 1.0; };
  m.d_beta = [](const Vector&) -> Vector { return Vector::Zero(2); };
  return m;
}

MetricField boost() {
  MetricField m = minkowski();
  m.delta = [](const Vector&) -> Vector { return vec2(0.5, 0.0); };
  return m;
}

MetricField static_well() {
  MetricField m = minkowski();
  m.beta = [](const Vector& x) { return 1.0 + x.squaredNorm(); };
  m.d_beta = [](const Vector& x) -> Vector { return 2.0 * x; };
  return m;
}

// Flat spacetime seen from a frame rotating at rate a. K stays timelike while
// a |x| < 1; the chart keeps a |x| <= 0.99.
MetricField rotating() {
  static constexpr double a = kRotationRate;
  MetricField m = flat_base(square(3.5));
  m.delta = [](const Vector& x) -> Vector { return vec2(-a * x[1], a * x[0]); };
  m.d_delta = [](const Vector&) -> Matrix {
    Matrix D(2, 2);
    D << 0.0, -a, a, 0.0;
    return D;
  };
  m.beta = [](const Vector& x) { return 1.0 - a * a * x.squaredNorm(); };
  m.d_beta = [](const Vector& x) -> Vector { return -2.0 * a * a * x; };
  return m;
}

SpacetimePoint at(double x, double y, double t) { return {vec2(x, y), t}; }

Expected expect(std::optional<double> J, std::optional<double> Delta, SpacetimePoint start, CausalCharacter ch,
                std::string source) {
  Expected e;
  e.J = J;
  e.Delta = Delta;
  e.start = std::move(start);
  e.character = ch;
  e.source = std::move(source);
  return e;
}

}  // namespace

std::vector<std::string> builtin_names() { return {"minkowski", "boost", "static-well", "rotating"}; }

std::vector<std::string> builtin_pairs(const std::string& name) {
  builtin_metric(name);
  return {"point-point", "sphere-point", "cylinder-cylinder"};
}

MetricField builtin_metric(const std::string& name) {
  if (name == "minkowski") return minkowski();
  if (name == "boost") return boost();
  if (name == "static-well") return static_well();
  if (name == "rotating") return rotating();
  throw UnknownScenario("unknown builtin scenario '" + name + "'");
}

Scenario builtin(const std::string& name, const std::string& pair) {
  Scenario s;
  s.name = name;
  s.pair = pair;
  s.metric = builtin_metric(name);
  const Vector origin = Vector::Zero(2);

  if (pair == "point-point") {
    s.boundary.P = make_point(at(0, 0, 0));
    s.boundary.Q = make_point(at(1, 0, 0));
    s.boundary.hypothesis = Hypothesis::H1;
    s.boundary.D_Q_bound = 0.0;
    s.description = "fixed events ((0,0),0) and ((1,0),0)";
    if (name == "minkowski" || name == "boost") {
      s.expected = expect(0.5, 0.0, at(0, 0, 0), CausalCharacter::Spacelike,
                          "constant metric: the straight segment, J = g(u,u)/2 with u = (1,0,0)");
    }
  } else if (pair == "sphere-point") {
    s.boundary.P = make_sphere(origin, 1.0, 0.0);
    s.boundary.Q = make_point(at(3, 0, 2));
    s.boundary.hypothesis = Hypothesis::H1;
    s.boundary.D_Q_bound = 2.0;
    s.description = "P = {|x| = 1, t = 0}, Q = ((3,0),2)";
    if (name == "minkowski") {
      s.expected = expect(0.0, 2.0, at(1, 0, 0), CausalCharacter::Lightlike,
                          "straight segments from the circle; J(theta) = (10 - 6 cos theta - 4)/2 minimal at theta = 0");
    } else if (name == "boost") {
      s.expected = expect(2.0, 2.0, at(1, 0, 0), CausalCharacter::Spacelike,
                          "straight segments from the circle; J(theta) = (12 - 8 cos theta)/2 minimal at theta = 0");
    }
  } else if (pair == "cylinder-cylinder") {
    s.boundary.P = make_cylinder(origin, 1.0);
    s.boundary.Q = make_cylinder(vec2(3, 0), 0.0);
    s.boundary.hypothesis = Hypothesis::H2;
    s.boundary.lift_t0 = 0.0;
    s.description = "P = {|x| = 1} x R, Q = {(3,0)} x R";
    if (name == "minkowski" || name == "static-well") {
      s.expected = expect(2.0, 0.0, at(1, 0, 0), CausalCharacter::Spacelike,
                          "h1 = identity: radial base segment from (1,0) to (3,0), horizontal lift at constant t");
    } else if (name == "boost") {
      s.expected = expect(2.5, 1.0, at(1, 0, 0), CausalCharacter::Spacelike,
                          "h1 = diag(5/4, 1): squared distance 12.25 - 7.5c + 0.25c^2 over the circle is minimal at "
                          "c = 1; the lift rises by g0[delta, v]/beta = 1");
    } else if (name == "rotating") {
      s.expected = expect(2.0, 0.0, at(1, 0, 0), CausalCharacter::Spacelike,
                          "h1 is invariant under x2 -> -x2, so the x1 axis is an h1 geodesic; delta is orthogonal to "
                          "it there, so h1 = identity on its velocity and the lift stays at t0");
    }
  } else {
    throw UnknownScenario("unknown boundary pair '" + pair + "'");
  }
  s.boundary.P.label = "P";
  s.boundary.Q.label = "Q";
  if (s.expected) s.expected->tolerance = 1e-5;
  return s;
}

Sampler sampler_for(const Scenario& s, int per_axis) { return make_sampler(s.metric.chart, s.time_window, per_axis); }

}  // namespace ngeo
