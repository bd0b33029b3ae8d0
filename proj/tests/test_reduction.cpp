#include <doctest.h>

#include "ngeo/reduction.hpp"
#include "support.hpp"

using namespace ngeo;
using namespace ngeo::test;

TEST_SUITE("reduction") {

TEST_CASE("C_z") {
  const MetricField mink = builtin_metric("minkowski");
  const MetricField boost = builtin_metric("boost");
  std::mt19937_64 rng(1);
  const SpatialCurve x = random_curve(rng, 16);
  CHECK(compute_Cz(mink, x, 2.0) == doctest::Approx(-2.0));
  const double A = reduced_integrals(boost, x).drift;
  CHECK(std::abs(compute_Cz(boost, x, A)) <= 1e-15);
  CHECK(compute_Cz(boost, straight(v2(0, 0), v2(1, 0), 8), 0.0) == doctest::Approx(0.5));
}

TEST_CASE("reconstruct_t") {
  const MetricField mink = builtin_metric("minkowski");
  const SpacetimeCurve c = reconstruct_t(mink, {straight(v2(0, 0), v2(1, 1), 10), 0.0, 2.0});
  for (int i = 0; i <= 10; ++i) CHECK(c.nodes[i].t == doctest::Approx(0.2 * i));

  const SpacetimeCurve flat = reconstruct_t(mink, {straight(v2(0, 0), v2(1, 1), 10), 1.5, 0.0});
  for (const auto& n : flat.nodes) CHECK(n.t == doctest::Approx(1.5));

  std::mt19937_64 rng(2);
  for (const auto& name : builtin_names()) {
    const MetricField m = builtin_metric(name);
    for (int k = 0; k < 10; ++k) {
      const ReducedState rs = random_state(rng, 32);
      const SpacetimeCurve z = reconstruct_t(m, rs);
      CHECK(std::abs(delta_z(z) - rs.Delta) <= 1e-12);
      CHECK(z.nodes.front().t == rs.t0);
    }
  }
}

TEST_CASE("eval_J closed forms") {
  const MetricField mink = builtin_metric("minkowski");
  // Euclidean length 5.
  CHECK(eval_J(mink, straight(v2(0, 0), v2(3, 4), 8), 2.0) == doctest::Approx(0.5 * (25.0 - 4.0)));
  std::mt19937_64 rng(3);
  const SpatialCurve x = random_curve(rng, 32);
  const double energy = reduced_integrals(mink, x).energy;
  CHECK(eval_J(mink, x, 0.0) == doctest::Approx(0.5 * energy));
  CHECK(eval_J(mink, x, 0.0) >= 0.0);
  // Boost: E = 1, A = 1/2, D = 1/4, B = 1.
  CHECK(eval_J(builtin_metric("boost"), straight(v2(0, 0), v2(1, 0), 8), 0.0) ==
        doctest::Approx(0.5 + 0.125 - 0.125));
}

TEST_CASE("grad_J") {
  const MetricField mink = builtin_metric("minkowski");
  const JGradient g = grad_J(mink, straight(v2(0, 0), v2(1, 0), 8), 1.5);
  CHECK(g.dDelta == doctest::Approx(-1.5));
  for (int i = 1; i < 8; ++i) CHECK(g.nodes[i].norm() <= 1e-12);

  std::mt19937_64 rng(4);
  const double h = 1e-6;
  for (const auto& name : builtin_names()) {
    const MetricField m = builtin_metric(name);
    for (int k = 0; k < 5; ++k) {
      ReducedState rs = random_state(rng, 16);
      const JGradient G = grad_J(m, rs.x, rs.Delta);
      CHECK(G.value == doctest::Approx(eval_J(m, rs.x, rs.Delta)).epsilon(1e-14));
      const double fd_D = (eval_J(m, rs.x, rs.Delta + h) - eval_J(m, rs.x, rs.Delta - h)) / (2 * h);
      CHECK(rel(fd_D, G.dDelta) <= 1e-6);
      for (int i : {0, 5, 16}) {
        for (int c = 0; c < 2; ++c) {
          SpatialCurve p = rs.x, q = rs.x;
          p.nodes[i][c] += h;
          q.nodes[i][c] -= h;
          const double fd = (eval_J(m, p, rs.Delta) - eval_J(m, q, rs.Delta)) / (2 * h);
          CHECK(std::abs(fd - G.nodes[i][c]) <= 1e-6 * std::max(1.0, G.nodes[i].norm()));
        }
      }
    }
  }
}

TEST_CASE("grad_f matches finite differences") {
  std::mt19937_64 rng(5);
  const double h = 1e-6;
  for (const auto& name : builtin_names()) {
    const MetricField m = builtin_metric(name);
    const SpacetimeCurve c = reconstruct_t(m, random_state(rng, 12));
    const std::vector<Vector> g = grad_f(m, c);
    for (int i : {0, 6, 12}) {
      for (int k = 0; k < 3; ++k) {
        SpacetimeCurve p = c, q = c;
        if (k < 2) {
          p.nodes[i].x[k] += h;
          q.nodes[i].x[k] -= h;
        } else {
          p.nodes[i].t += h;
          q.nodes[i].t -= h;
        }
        const double fd = (eval_f(m, p) - eval_f(m, q)) / (2 * h);
        CHECK(std::abs(fd - g[i][k]) <= 1e-6 * std::max(1.0, g[i].norm()));
      }
    }
  }
}

TEST_CASE("eval_f simple values") {
  const MetricField mink = builtin_metric("minkowski");
  CHECK(eval_f(mink, straight(sp(0, 0, 0), sp(3, 4, 2), 8)) == doctest::Approx(0.5 * (25.0 - 4.0)));
  CHECK(eval_f(mink, straight(sp(1, 1, 1), sp(1, 1, 1), 8)) == 0.0);
}

TEST_CASE("restriction of f to the constrained curves is J") {
  std::mt19937_64 rng(6);
  for (const auto& name : builtin_names()) {
    const MetricField m = builtin_metric(name);
    for (int k = 0; k < 10; ++k) {
      const ReducedState rs = random_state(rng, 32);
      const double J = eval_J(m, rs.x, rs.Delta);
      CHECK(std::abs(eval_f(m, reconstruct_t(m, rs)) - J) <= 1e-10 * (1 + std::abs(J)));
    }
  }
}

TEST_CASE("the constrained time function maximizes f at fixed x and Delta") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 0.3);
  for (const auto& name : builtin_names()) {
    const MetricField m = builtin_metric(name);
    for (int k = 0; k < 10; ++k) {
      const ReducedState rs = random_state(rng, 32);
      const double J = eval_J(m, rs.x, rs.Delta);
      SpacetimeCurve c = reconstruct_t(m, rs);
      const double amp = gauss(rng);
      for (int i = 1; i < 32; ++i) c.nodes[i].t += amp * std::sin(std::numbers::pi * i / 32.0);
      CHECK(eval_f(m, c) <= J + 1e-12);
      CHECK(conservation_record(m, c).max_deviation > 0.0);
    }
  }
}

TEST_CASE("J does not depend on t0") {
  std::mt19937_64 rng(8);
  const MetricField m = builtin_metric("rotating");
  ReducedState rs = random_state(rng, 16);
  const SpacetimeCurve a = reconstruct_t(m, rs);
  rs.t0 += 3.25;
  const SpacetimeCurve b = reconstruct_t(m, rs);
  for (int i = 0; i <= 16; ++i) CHECK(b.nodes[i].t - a.nodes[i].t == doctest::Approx(3.25));
  CHECK(eval_f(m, a) == doctest::Approx(eval_f(m, b)).epsilon(1e-14));
}

TEST_CASE("conservation record") {
  const MetricField mink = builtin_metric("minkowski");
  const ConservationRecord flat = conservation_record(mink, straight(sp(0, 0, 0), sp(1, 2, 0.5), 16));
  CHECK(flat.max_deviation <= 1e-12);
  CHECK(flat.E_deviation <= 1e-12);
  CHECK(flat.C_z == doctest::Approx(-0.5));

  std::mt19937_64 rng(9);
  const MetricField well = builtin_metric("static-well");
  const ConservationRecord rec = conservation_record(well, reconstruct_t(well, random_state(rng, 32)));
  CHECK(rec.max_deviation <= 1e-12);

  SpacetimeCurve quad;
  for (int i = 0; i <= 32; ++i) {
    const double s = i / 32.0;
    quad.nodes.push_back(sp(s, 0, s * s));
  }
  CHECK(conservation_record(mink, quad).max_deviation > 0.1);
}

TEST_CASE("reduced state round trip") {
  std::mt19937_64 rng(10);
  const MetricField m = builtin_metric("boost");
  const ReducedState rs = random_state(rng, 8);
  const ReducedState back = reduced_state(reconstruct_t(m, rs));
  CHECK(back.t0 == rs.t0);
  CHECK(back.Delta == doctest::Approx(rs.Delta).epsilon(1e-14));
  for (int i = 0; i <= 8; ++i) CHECK(back.x.nodes[i] == rs.x.nodes[i]);
}

}
