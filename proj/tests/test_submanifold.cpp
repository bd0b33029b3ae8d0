#include <doctest.h>

#include "ngeo/submanifold.hpp"
#include "support.hpp"

using namespace ngeo;
using namespace ngeo::test;

namespace {

Vector z3(double a, double b, double t) {
  Vector z(3);
  z << a, b, t;
  return z;
}

// Cylindrical unit circle {|x|^2 = 1} x R.
Submanifold circle_cylinder() { return make_cylinder(Vector::Zero(2), 1.0); }

}  // namespace

TEST_SUITE("submanifolds") {

TEST_CASE("projection") {
  SUBCASE("radial projection onto a cylinder") {
    const SpacetimePoint p = project(circle_cylinder(), sp(2, 0, 3));
    CHECK(p.x[0] == doctest::Approx(1.0));
    CHECK(std::abs(p.x[1]) <= 1e-12);
    CHECK(p.t == doctest::Approx(3.0));
  }
  SUBCASE("points on the set stay put") {
    const Vector z = z3(0.6, 0.8, -1.0);
    CHECK((project(circle_cylinder(), z) - z).norm() <= 1e-9);
  }
  SUBCASE("affine constraint") {
    const Submanifold plane = make_plane(z3(0, 0, 1), 5.0);
    const SpacetimePoint p = project(plane, sp(1, 1, 0));
    CHECK(p.x == v2(1, 1));
    CHECK(p.t == doctest::Approx(5.0));
  }
  SUBCASE("idempotent") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const Submanifold s = make_sphere(v2(0.5, 0), 1.0, 2.0);
    ProjectionSettings ps;
    for (int k = 0; k < 20; ++k) {
      const Vector z = project(s, project(s, z3(u(rng), u(rng), u(rng))));
      CHECK(s.value(z).norm() <= ps.tol_on);
    }
  }
  SUBCASE("failure carries the last iterate") {
    // x^2 + 1 = 0 has no real solution.
    const Submanifold empty(3, 1, [](const Vector& z) {
      Vector v(1);
      v[0] = z[0] * z[0] + 1.0;
      return v;
    });
    try {
      project(empty, z3(1, 0, 0));
      FAIL("expected ProjectionFailed");
    } catch (const ProjectionFailed& e) {
      CHECK(e.last_iterate.size() == 3);
    }
  }
}

TEST_CASE("tangent basis") {
  SUBCASE("plane t = 0") {
    const Matrix B = tangent_basis(make_plane(z3(0, 0, 1), 0.0), z3(0.3, 0.1, 0));
    REQUIRE(B.cols() == 2);
    CHECK(B.row(2).norm() <= 1e-14);
    CHECK((B.transpose() * B - Matrix::Identity(2, 2)).norm() <= 1e-12);
  }
  SUBCASE("cylinder at (1,0,0) starts with K") {
    const std::vector<TangentVector> B = tangent_basis(circle_cylinder(), sp(1, 0, 0));
    REQUIRE(B.size() == 2);
    CHECK(B[0].y.norm() <= 1e-14);
    CHECK(std::abs(B[0].tau) == doctest::Approx(1.0));
    CHECK(std::abs(B[1].y[1]) == doctest::Approx(1.0));
  }
  SUBCASE("kernel of the Jacobian for a random level set") {
    const Submanifold s(3, 1, [](const Vector& z) {
      Vector v(1);
      v[0] = z[0] * z[0] * z[1] + std::sin(z[2]) + z[1] - 0.4;
      return v;
    });
    const Vector z = project(s, z3(0.3, 0.2, 0.1));
    const Matrix B = tangent_basis(s, z);
    CHECK(B.cols() == 2);
    CHECK((s.jacobian(z) * B).cwiseAbs().maxCoeff() <= 1e-8);
  }
  SUBCASE("points have an empty tangent space") {
    CHECK(tangent_basis(make_point(sp(0, 0, 0)), z3(0, 0, 0)).cols() == 0);
  }
  SUBCASE("rank deficiency") {
    // |x|^2 = 0 has a vanishing gradient on the set.
    const Submanifold cone(3, 1, [](const Vector& z) {
      Vector v(1);
      v[0] = z.head(2).squaredNorm();
      return v;
    });
    CHECK_THROWS_AS(tangent_basis(cone, z3(0, 0, 0)), DegenerateSubmanifold);
  }
}

TEST_CASE("cylindrical sets contain the Killing direction") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Submanifold s = circle_cylinder();
  for (int k = 0; k < 10; ++k) {
    const Vector z = project(s, z3(u(rng), u(rng), u(rng)));
    const Matrix B = tangent_basis(s, z);
    CHECK(B.col(0).head(2).norm() <= 1e-12);
  }
  CHECK(verify_cylindrical(s, make_sampler(Box{v2(-2, -2), v2(2, 2)}, 5.0)));
}

TEST_CASE("orthogonality residual") {
  const MetricField m = builtin_metric("minkowski");
  BoundaryPair bp;
  bp.P = make_sphere(Vector::Zero(2), 1.0, 0.0);
  bp.Q = make_point(sp(3, 0, 0));
  const auto radial = orthogonality_residual(m, straight(sp(1, 0, 0), sp(3, 0, 0), 16), bp);
  CHECK(radial.r0 <= 1e-8);
  CHECK(radial.r1 <= 1e-8);

  BoundaryPair points;
  points.P = make_point(sp(0, 0, 0));
  points.Q = make_point(sp(1, 1, 1));
  const auto pp = orthogonality_residual(m, straight(sp(0, 0, 0), sp(1, 1, 1), 8), points);
  CHECK(pp.r0 == 0.0);
  CHECK(pp.r1 == 0.0);

  BoundaryPair tilted = bp;
  tilted.Q = make_point(sp(3, 2, 0));
  const auto off = orthogonality_residual(m, straight(sp(1, 0, 0), sp(3, 2, 0), 16), tilted);
  CHECK(off.r0 > 0.1);

  CHECK_THROWS_AS(orthogonality_residual(m, straight(sp(1.5, 0, 0), sp(3, 0, 0), 16), bp), PreconditionError);
}

TEST_CASE("boundary pair validation") {
  const Sampler s = make_sampler(Box{v2(-4, -4), v2(4, 4)}, 5.0);
  BoundaryPair same;
  same.P = make_point(sp(1, 0, 0));
  same.Q = make_point(sp(1, 0, 0));
  CHECK_THROWS_WITH_AS(validate_boundary_pair(same, s), doctest::Contains("disjoint"), InvalidScenario);

  BoundaryPair crossing;
  crossing.P = make_sphere(Vector::Zero(2), 1.0, 0.0);
  crossing.Q = make_plane(z3(1, 0, 0), 0.5);
  CHECK_THROWS_AS(validate_boundary_pair(crossing, s), InvalidScenario);

  BoundaryPair h2;
  h2.hypothesis = Hypothesis::H2;
  h2.P = circle_cylinder();
  h2.Q = make_point(sp(3, 0, 0));
  CHECK_THROWS_AS(validate_boundary_pair(h2, s), InvalidScenario);
  h2.Q = make_cylinder(v2(3, 0), 0.0);
  CHECK_NOTHROW(validate_boundary_pair(h2, s));

  BoundaryPair lying;
  lying.hypothesis = Hypothesis::H2;
  lying.P = make_sphere(Vector::Zero(2), 1.0, 0.0);
  lying.P.cylindrical = true;
  lying.Q = make_cylinder(v2(3, 0), 0.0);
  CHECK_THROWS_AS(validate_boundary_pair(lying, s), InvalidScenario);
}

TEST_CASE("H1 sampling report") {
  const Sampler s = make_sampler(Box{v2(-2, -2), v2(2, 2)}, 6.0, 9);
  BoundaryPair bp;
  bp.P = make_sphere(Vector::Zero(2), 1.0, 0.0);
  bp.Q = make_plane(z3(0, 0, 1), 2.0);
  const H1Report r = check_H1(bp, s);
  CHECK(r.D_Q == doctest::Approx(2.0));
  CHECK_FALSE(r.Q_unbounded);
  CHECK(r.P_bounded);

  bp.Q = make_cylinder(v2(1.5, 0), 0.2);
  const H1Report cyl = check_H1(bp, s);
  CHECK(cyl.Q_unbounded);
  CHECK_FALSE(cyl.warnings.empty());

  // Q = graph of t = sin(|x|).
  bp.Q = Submanifold(3, 1, [](const Vector& z) {
    Vector v(1);
    v[0] = z[2] - std::sin(z.head(2).norm());
    return v;
  });
  const H1Report graph = check_H1(bp, s);
  CHECK(graph.Q_samples > 0);
  CHECK(graph.D_Q <= 1.0 + 1e-9);
  CHECK(graph.D_Q >= 0.9);
  CHECK_FALSE(graph.Q_unbounded);
}

TEST_CASE("base sets of cylinders") {
  const Submanifold base = base_of(circle_cylinder());
  CHECK(base.ambient_dim() == 2);
  CHECK(base.value(v2(0, 1)).norm() <= 1e-15);
  CHECK(base.compact);
  CHECK_THROWS_AS(base_of(make_point(sp(0, 0, 0))), PreconditionError);
}

}
