#include <doctest.h>

#include "ngeo/spacetime.hpp"
#include "support.hpp"

using namespace ngeo;
using namespace ngeo::test;

TEST_SUITE("spacetime") {

TEST_CASE("eval_g on simple vectors") {
  const MetricField mink = builtin_metric("minkowski");
  const MetricField boost = builtin_metric("boost");
  const SpacetimePoint p = sp(0.3, -0.2, 1.0);
  CHECK(eval_g(mink, p, tv(1, 0, 1), tv(1, 0, 1)) == doctest::Approx(0.0));
  CHECK(eval_g(boost, p, tv(1, 0, 1), tv(1, 0, 1)) == doctest::Approx(1.0));
  CHECK(eval_g(boost, p, tv(0, 0, 0), tv(0, 0, 0)) == 0.0);
}

TEST_CASE("eval_g is symmetric and bilinear") {
  const MetricField m = builtin_metric("rotating");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    const SpacetimePoint p = sp(u(rng), u(rng), u(rng));
    const TangentVector v = tv(u(rng), u(rng), u(rng)), w = tv(u(rng), u(rng), u(rng));
    CHECK(std::abs(eval_g(m, p, v, w) - eval_g(m, p, w, v)) <= 1e-12);
    const TangentVector v2x{2.0 * v.y, 2.0 * v.tau};
    CHECK(eval_g(m, p, v2x, w) == doctest::Approx(2.0 * eval_g(m, p, v, w)));
  }
}

TEST_CASE("eval_g rejects points outside the chart") {
  const MetricField m = builtin_metric("minkowski");
  CHECK_THROWS_AS(eval_g(m, sp(10, 0, 0), tv(1, 0, 0), tv(1, 0, 0)), DomainError);
}

TEST_CASE("auxiliary Riemannian metric") {
  const MetricField mink = builtin_metric("minkowski");
  const MetricField boost = builtin_metric("boost");
  const SpacetimePoint p = sp(0, 0, 0);
  CHECK(eval_gR(mink, p, tv(0, 0, 1), tv(0, 0, 1)) == doctest::Approx(1.0));
  CHECK(eval_gR(mink, p, tv(1, 0, 0), tv(1, 0, 0)) == doctest::Approx(1.0));
  // g(v,v) = 1, g(v,K) = 1/2 - 1, g(K,K) = -1.
  CHECK(eval_gR(boost, p, tv(1, 0, 1), tv(1, 0, 1)) == doctest::Approx(1.0 + 2.0 * 0.25));
}

TEST_CASE("g_R is positive definite and g(K,K) = -beta") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto& name : builtin_names()) {
    const MetricField m = builtin_metric(name);
    for (int k = 0; k < 40; ++k) {
      const SpacetimePoint p = sp(u(rng), u(rng), u(rng));
      const TangentVector v = tv(u(rng), u(rng), u(rng));
      CHECK(eval_gR(m, p, v, v) > 0.0);
      CHECK(eval_g(m, p, tv(0, 0, 1), tv(0, 0, 1)) == doctest::Approx(-m.beta(p.x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("g_R needs a timelike Killing field") {
  MetricField m = builtin_metric("minkowski");
  m.beta = [](const Vector&) { return -1.0; };
  CHECK_THROWS_AS(eval_gR(m, sp(0, 0, 0), tv(1, 0, 0), tv(1, 0, 0)), ModelError);
}

TEST_CASE("Killing flow and s_R") {
  const SpacetimePoint p = sp(1, 2, 0);
  const SpacetimePoint q = killing_flow(p, 3.0);
  CHECK(q.x == p.x);
  CHECK(q.t == 3.0);
  CHECK(killing_flow(p, 0.0).t == p.t);
  const SpacetimePoint r = killing_flow(killing_flow(sp(0.5, 0.5, 0.25), 1.5), -0.75);
  CHECK(r.t == doctest::Approx(0.25 + 0.75));
  CHECK(s_R(sp(0, 0, 5)) == -5.0);
  CHECK(s_R(sp(1, 1, 0)) == 0.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 20; ++k) {
    const SpacetimePoint z = sp(u(rng), u(rng), u(rng));
    CHECK(killing_flow(z, s_R(z)).t == 0.0);
  }
}

TEST_CASE("Christoffel symbols") {
  SUBCASE("vanish for Minkowski") {
    const Christoffel G = christoffel(builtin_metric("minkowski"), sp(0.4, -1.1, 2));
    for (const Matrix& g : G.gamma) CHECK(g.cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("static well, exact derivatives") {
    // g = diag(1, 1, -(1 + |x|^2)): Gamma^t_{ti} = x_i / beta, Gamma^i_{tt} = x_i.
    const MetricField m = builtin_metric("static-well");
    const Vector x = v2(0.7, -0.4);
    const double beta = 1 + x.squaredNorm();
    const Christoffel G = christoffel(m, {x, 0.0});
    for (int i = 0; i < 2; ++i) {
      CHECK(G(2, 2, i) == doctest::Approx(x[i] / beta));
      CHECK(G(2, i, 2) == doctest::Approx(x[i] / beta));
      CHECK(G(i, 2, 2) == doctest::Approx(x[i]));
      for (int j = 0; j < 2; ++j) CHECK(std::abs(G(i, j, 0)) + std::abs(G(i, j, 1)) <= 1e-14);
    }
  }
  SUBCASE("finite differences agree with exact derivatives") {
    for (const auto& name : builtin_names()) {
      const MetricField exact = builtin_metric(name);
      MetricField fd = exact;
      fd.d_g0 = nullptr;
      fd.d_delta = nullptr;
      fd.d_beta = nullptr;
      const SpacetimePoint p = sp(0.9, 1.3, 0);
      const Christoffel a = christoffel(exact, p), b = christoffel(fd, p);
      for (int k = 0; k < 3; ++k) CHECK((a.gamma[k] - b.gamma[k]).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
  SUBCASE("symmetric in the lower indices") {
    const Christoffel G = christoffel(builtin_metric("rotating"), sp(1.2, 0.3, 0));
    for (const Matrix& g : G.gamma) CHECK((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("finite differences need a margin inside the chart") {
    MetricField m = builtin_metric("static-well");
    m.d_beta = nullptr;
    CHECK_THROWS_AS(christoffel(m, sp(4.0, 0, 0)), DomainError);
  }
}

TEST_CASE("K satisfies the Killing equation numerically") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& name : builtin_names()) {
    MetricField m = builtin_metric(name);
    m.d_g0 = nullptr;
    m.d_delta = nullptr;
    m.d_beta = nullptr;
    for (int k = 0; k < 10; ++k) {
      const Vector x = v2(u(rng), u(rng));
      const Matrix G = m.full_metric(x);
      const Christoffel C = christoffel(m, {x, 0.0});
      // (nabla_a K)^k = Gamma^k_{a t}
      Matrix S(3, 3);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double s = 0.0;
          for (int c = 0; c < 3; ++c) s += G(b, c) * C(c, a, 2) + G(a, c) * C(c, b, 2);
          S(a, b) = s;
        }
      CHECK(S.cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
}

TEST_CASE("geodesic residual") {
  const MetricField m = builtin_metric("minkowski");
  CHECK(geodesic_residual(m, straight(sp(-1, 0.5, 0), sp(1, 1, 2), 32)) <= 1e-10);

  auto bent = [](int N) {
    SpacetimeCurve c;
    for (int i = 0; i <= N; ++i) {
      const double s = static_cast<double>(i) / N;
      c.nodes.push_back(sp(s, 0, s * s));
    }
    return c;
  };
  CHECK(geodesic_residual(m, bent(32)) > 0.1);

  // A smooth non-geodesic in a curved metric: against the exact residual at the
  // same nodes (analytic derivatives), the discrete one is second order.
  const MetricField well = builtin_metric("static-well");
  auto wiggle = [](int N) {
    SpacetimeCurve c;
    for (int i = 0; i <= N; ++i) {
      const double s = static_cast<double>(i) / N;
      c.nodes.push_back(sp(std::sin(2 * s), s * s, std::cos(3 * s)));
    }
    return c;
  };
  auto exact = [&](int N) {
    double worst = 0.0;
    for (int i = 1; i < N; ++i) {
      const double s = static_cast<double>(i) / N;
      const SpacetimePoint p = sp(std::sin(2 * s), s * s, std::cos(3 * s));
      Vector vel(3), acc(3);
      vel << 2 * std::cos(2 * s), 2 * s, -3 * std::sin(3 * s);
      acc << -4 * std::sin(2 * s), 2, -9 * std::cos(3 * s);
      const Vector r = acc + christoffel(well, p).contract(vel, vel);
      worst = std::max(worst, std::sqrt(r.dot(riemannian_matrix(well, p.x) * r)));
    }
    return worst;
  };
  const double e32 = std::abs(geodesic_residual(well, wiggle(32)) - exact(32));
  const double e64 = std::abs(geodesic_residual(well, wiggle(64)) - exact(64));
  CHECK(e32 / e64 == doctest::Approx(4.0).epsilon(0.25));

  CHECK_THROWS_AS(geodesic_residual(m, straight(sp(0, 0, 0), sp(1, 0, 0), 3)), PreconditionError);
}

TEST_CASE("energy and causal character") {
  const MetricField m = builtin_metric("minkowski");
  const auto a = energy_and_character(m, straight(sp(0, 0, 0), sp(1, 0, 0), 8));
  CHECK(a.E == doctest::Approx(1.0));
  CHECK(a.character == CausalCharacter::Spacelike);
  const auto b = energy_and_character(m, straight(sp(0, 0, 0), sp(0, 0, 1), 8));
  CHECK(b.E == doctest::Approx(-1.0));
  CHECK(b.character == CausalCharacter::Timelike);
  const auto c = energy_and_character(m, straight(sp(0, 0, 0), sp(1, 0, 1), 8));
  CHECK(c.E == doctest::Approx(0.0));
  CHECK(c.character == CausalCharacter::Lightlike);

  for (auto ch : {CausalCharacter::Timelike, CausalCharacter::Lightlike, CausalCharacter::Spacelike,
                  CausalCharacter::CausalBoundary}) {
    CHECK(causal_character_from_string(to_string(ch)) == ch);
  }
}

TEST_CASE("geodesics have nearly constant segment energies") {
  // Straight lines in the rotating frame are not geodesics, but inertial
  // straight lines are: X(s) = R(a t) x with t = s.
  const MetricField m = builtin_metric("rotating");
  auto inertial = [](int N) {
    SpacetimeCurve c;
    for (int i = 0; i <= N; ++i) {
      const double s = static_cast<double>(i) / N;
      const Vector X = v2(-1 + 2 * s, 0.5);
      const double th = -kRotationRate * s;  // x = R(-a t) X
      c.nodes.push_back({v2(std::cos(th) * X[0] - std::sin(th) * X[1], std::sin(th) * X[0] + std::cos(th) * X[1]), s});
    }
    return c;
  };
  for (int N : {32, 64}) {
    const SpacetimeCurve c = inertial(N);
    const double eps = geodesic_residual(m, c);
    CHECK(eps <= 1e-2 / (N * N) * 64);
    const auto e = segment_energies(m, c);
    const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    CHECK(*hi - *lo <= 10.0 * eps + 10.0 / (N * N));
  }
}

TEST_CASE("metric validation") {
  for (const auto& name : builtin_names()) CHECK_NOTHROW(builtin_metric(name).validate(10));
  MetricField bad = builtin_metric("minkowski");
  bad.g0 = [](const Vector&) -> Matrix { return -Matrix::Identity(2, 2); };
  CHECK_THROWS_AS(bad.validate(4), ModelError);
  MetricField neg = builtin_metric("minkowski");
  neg.beta = [](const Vector& x) { return x[0]; };
  CHECK_THROWS_AS(neg.validate(4), ModelError);
}

}
