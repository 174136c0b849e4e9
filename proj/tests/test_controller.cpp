#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hycol/controller.hpp"
#include "hycol/errors.hpp"

using namespace hycol;

namespace {

Body robot(int id, double x, double y, double th = 0.0) {
  Body b;
  b.id = id;
  b.kind = BodyKind::Robot;
  b.radius = 1.0;
  b.mass = Mass::finite(1.0);
  b.pose = {x, y, th};
  return b;
}

Body obstacle(int id, double x, double y, double r = 1.0) {
  Body b;
  b.id = id;
  b.radius = r;
  b.pose = {x, y, 0.0};
  return b;
}

ControllerParams single_obstacle_params() {
  ControllerParams p;
  p.rho = 9;
  p.sigma1 = 1.25;
  p.sigma2 = 0.6;
  p.sigma3 = 1.2;
  p.max_v = 5;
  p.max_w = 5;
  return p;
}

ControllerTerms terms(double a, double b, double c, double s, double e) {
  ControllerTerms t;
  t.a = a;
  t.b = b;
  t.c = c;
  t.s = s;
  t.e = e;
  return t;
}

}  // namespace

TEST_CASE("clf value") {
  CHECK(clf_value({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(clf_value({1, 0, 0}, {0, 0, 0}) == 0.5);
  const double dth = 0.49 * kPi;
  CHECK(clf_value({0, 7, 0.01 * kPi}, {0, 0, 0.5 * kPi}) ==
        doctest::Approx(24.5 + 0.5 * dth * dth).epsilon(1e-14));
  CHECK(clf_value({0, 7, 0.01 * kPi}, {0, 0, 0.5 * kPi}) == doctest::Approx(25.6849).epsilon(1e-5));
  // Heading difference is not wrapped.
  CHECK(clf_value({0, 0, 2.1 * kPi}, {0, 0, 0.1 * kPi}) == doctest::Approx(2.0 * kPi * kPi));
}

TEST_CASE("cbf value and gradient") {
  std::vector<Body> setup{robot(1, 0, 7), obstacle(3, 0, 4)};
  CHECK(cbf_value(1, setup) == 5.0);
  setup[0].pose.y = 6;
  CHECK(cbf_value(1, setup) == 0.0);

  std::vector<Body> pair{robot(1, 0, 0), robot(2, 2, 0)};
  CHECK(cbf_value(1, pair) == 0.0);
  CHECK(cbf_value(2, pair) == 0.0);

  // Summed form: inter-robot term plus one term per obstacle.
  std::vector<Body> all{robot(1, 0, 0), robot(2, 5, 0), obstacle(3, 0, 4), obstacle(4, -3, 0, 0.5)};
  const double expect = (25.0 - 4.0) + (16.0 - 4.0) + (9.0 - 2.25);
  CHECK(cbf_value(1, all) == doctest::Approx(expect).epsilon(1e-15));
  const Vec2 g = cbf_gradient(1, all);
  CHECK(g.x == doctest::Approx(2 * (0 - 5) + 2 * (0 - 0) + 2 * (0 + 3)));
  CHECK(g.y == doctest::Approx(2 * (0 - 0) + 2 * (0 - 4) + 0));
  CHECK_THROWS_AS(cbf_value(9, all), Error);
}

TEST_CASE("lie derivatives") {
  std::vector<Body> setup{robot(1, 0, 7, 0.5 * kPi), obstacle(3, 0, 4)};
  LieDerivatives d = lie_derivatives(1, {0, 7, 0.5 * kPi}, {0, 0, 0.5 * kPi}, setup);
  CHECK(d.c == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(d.s == 0.0);
  CHECK(d.e == doctest::Approx(6.0).epsilon(1e-14));

  d = lie_derivatives(1, {2, 3, 1.0}, {2, 3, 1.0}, setup);
  CHECK(d.c == 0.0);
  CHECK(d.s == 0.0);

  std::vector<Body> side{robot(1, 3, 0), obstacle(3, 0, 0)};
  d = lie_derivatives(1, {3, 0, 0}, {0, 0, 0}, side);
  CHECK(d.e == 6.0);
}

TEST_CASE("gamma is piecewise linear") {
  CHECK(gamma(2.0, 1.25) == 2.5);
  CHECK(gamma(0.0, 1.25) == 0.0);
  CHECK(gamma(-2.0, 1.25) == -2.0);
}

TEST_CASE("region classification examples") {
  CHECK(classify_region(terms(0, 5, 0, 0, 0), 9) == Region::Omega2);
  CHECK(classify_region(terms(3, -1, 1, 0, 2), 9) == Region::Omega4);
  CHECK(classify_region(terms(0, 0, 0, 0, 0), 9) == Region::Omega4);
  CHECK(classify_region(terms(-1, 1, 0, 0, 0), 9) == Region::Omega1);
  // a < cb/e with b <= 0: c=1, b=-4, e=-2 gives cb/e = 2 > a = 1.
  CHECK(classify_region(terms(1, -4, 1, 0, -2), 9) == Region::Omega3);
}

TEST_CASE("nominal control branches") {
  SUBCASE("at target the Omega2 output vanishes") {
    const ControllerTerms t = terms(0, 5, 1e-3, 2e-3, 1);
    CHECK(nominal_control(t, Region::Omega2, 9).u == ControlInput{0, 0});
  }
  SUBCASE("Omega2 closed form") {
    const ControllerTerms t = terms(2, 10, 1, 1, 0.5);
    const NominalControl n = nominal_control(t, Region::Omega2, 9);
    CHECK(n.u.v == doctest::Approx(-0.9 * 2 * 1 / 2.0));
    CHECK(n.u.w == doctest::Approx(-0.9 * 2 * 1 / 2.0));
  }
  SUBCASE("Omega3") {
    const NominalControl n = nominal_control(terms(1, -4, 1, 0, 2), Region::Omega3, 9);
    CHECK(n.u.v == 2.0);
    CHECK(n.u.w == 0.0);
  }
  SUBCASE("Omega4 with s = 0") {
    const NominalControl n = nominal_control(terms(3, -1, 1, 0, 2), Region::Omega4, 9);
    CHECK(n.u.v == 0.5);
    CHECK(n.u.w == 0.0);
    CHECK_FALSE(n.degenerate);
  }
  SUBCASE("Omega4 general") {
    // w = (b c - a e) / (c^2/rho + (rho+1)/rho s^2) * s / e
    const double a = 3, b = -1, c = 1, s = 0.5, e = 2, rho = 9;
    const double w = (b * c - a * e) / (c * c / rho + (rho + 1) / rho * s * s) * s / e;
    const NominalControl n = nominal_control(terms(a, b, c, s, e), Region::Omega4, rho);
    CHECK(n.u.v == 0.5);
    CHECK(n.u.w == doctest::Approx(w).epsilon(1e-14));
  }
  SUBCASE("degenerate denominators") {
    NominalControl n = nominal_control(terms(0, 0, 0, 0, 0), Region::Omega4, 9);
    CHECK(n.degenerate);
    CHECK(n.u == ControlInput{0, 0});
    n = nominal_control(terms(1, 1, 0, 0, 1), Region::Omega2, 9);
    CHECK(n.degenerate);
    CHECK(n.u == ControlInput{0, 0});
    n = nominal_control(terms(1, -1, 1, 0, 0), Region::Omega3, 9);
    CHECK(n.degenerate);
    CHECK(n.u == ControlInput{0, 0});
  }
}

TEST_CASE("saturation") {
  CHECK(saturate({12, 0}, 10, 2).v == 10);
  CHECK(saturate({-12, 0}, 10, 2).v == -10);
  CHECK(saturate({3, -1}, 10, 2) == ControlInput{3, -1});
  CHECK(saturate({0, -7}, 10, 2).w == -2);
}

TEST_CASE("predefined control in the single-obstacle setup") {
  std::vector<Body> bodies{robot(1, 0, 8, 0.01 * kPi), obstacle(3, 0, 4)};
  const RobotState xi{0, 8, 0.01 * kPi};
  const RobotState target{0, 0, 0.5 * kPi};
  const ControlOutput out = predefined_control(1, xi, target, bodies, single_obstacle_params());
  CHECK(std::isfinite(out.u.v));
  CHECK(std::isfinite(out.u.w));
  CHECK(std::abs(out.u.v) <= 5.0);
  CHECK(std::abs(out.u.w) <= 5.0);

  // Hand evaluation: V, h and the Lie terms, then the Omega2 branch.
  const double V = 0.5 * (64.0 + std::pow(0.49 * kPi, 2));
  const double a = 1.25 * 0.6 * V;
  const double c = 8.0 * std::sin(0.01 * kPi);
  const double s = -0.49 * kPi;
  CHECK(out.terms.V == doctest::Approx(V));
  CHECK(out.terms.h == doctest::Approx(12.0));
  CHECK(out.region == Region::Omega2);
  CHECK(out.nominal.v == doctest::Approx(-0.9 * a * c / (c * c + s * s)));
  CHECK(out.u.w == 5.0);  // nominal w is about 14.2
}

TEST_CASE("predefined control at the target is zero") {
  std::vector<Body> bodies{robot(1, 2, 2, 0.3), obstacle(3, 8, 8)};
  const ControlOutput out = predefined_control(1, {2, 2, 0.3}, {2, 2, 0.3}, bodies, single_obstacle_params());
  CHECK(out.u == ControlInput{0, 0});
}

TEST_CASE("a lone robot is unconstrained") {
  std::vector<Body> bodies{robot(1, 5, 0, 0)};
  const ControlOutput out = predefined_control(1, {5, 0, 0}, {0, 0, 0}, bodies, single_obstacle_params());
  CHECK(out.region == Region::Omega2);
  // c = 5, s = 0, a = 0.75 * 12.5: v = -0.9 a / c
  CHECK(out.u.v == doctest::Approx(-0.9 * 0.75 * 12.5 / 5.0));
}

TEST_CASE("property: controller invariants over random states") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> pos(-20.0, 20.0);
  std::uniform_real_distribution<double> ang(-4.0 * kPi, 4.0 * kPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int omega1_seen = 0;
  int equality_checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    ControllerParams p;
    p.rho = 0.1 + 20.0 * unit(rng);
    p.sigma1 = 1.0 + 2.0 * unit(rng);
    p.sigma2 = 0.05 + 2.0 * unit(rng);
    p.sigma3 = 0.05 + 2.0 * unit(rng);
    p.max_v = 0.5 + 10.0 * unit(rng);
    p.max_w = 0.5 + 5.0 * unit(rng);

    std::vector<Body> bodies{robot(1, pos(rng), pos(rng), ang(rng))};
    if (unit(rng) < 0.6) bodies.push_back(robot(2, pos(rng), pos(rng), ang(rng)));
    const int obstacles = static_cast<int>(4.0 * unit(rng));
    for (int k = 0; k < obstacles; ++k) bodies.push_back(obstacle(3 + k, pos(rng), pos(rng), 0.2 + 2 * unit(rng)));
    const RobotState xi = bodies[0].pose;
    RobotState target{pos(rng), pos(rng), ang(rng)};
    if (unit(rng) < 0.05) target = xi;

    ControlOutput out;
    REQUIRE_NOTHROW(out = predefined_control(1, xi, target, bodies, p));
    REQUIRE(std::isfinite(out.u.v));
    REQUIRE(std::isfinite(out.u.w));
    CHECK(std::abs(out.u.v) <= p.max_v);
    CHECK(std::abs(out.u.w) <= p.max_w);
    CHECK(out.terms.V >= 0.0);
    CHECK(out.terms.a >= 0.0);
    if (out.region == Region::Omega1) ++omega1_seen;

    const double e = out.terms.e;
    if (std::abs(e) >= 1e-9) {
      const double slack = out.terms.b + e * out.nominal.v;
      CHECK(slack >= -1e-9 * std::max(1.0, std::abs(out.terms.b)));
      if (out.region == Region::Omega3 || out.region == Region::Omega4) {
        CHECK(std::abs(slack) <= 1e-9 * std::max(1.0, std::abs(out.terms.b)));
        ++equality_checked;
      }
    }

    // Determinism.
    const ControlOutput again = predefined_control(1, xi, target, bodies, p);
    CHECK(again.u == out.u);
    CHECK(again.region == out.region);
  }
  CHECK(omega1_seen == 0);
  CHECK(equality_checked > 0);
}

TEST_CASE("property: classification is total for a >= 0") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> x(-10.0, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    ControllerTerms t = terms(x(rng), x(rng), x(rng), x(rng), x(rng));
    // Exercise exact zeros and sub-guard magnitudes.
    if (unit(rng) < 0.1) t.c = 0.0;
    if (unit(rng) < 0.1) t.s = 0.0;
    if (unit(rng) < 0.1) t.e = 1e-12;
    if (unit(rng) < 0.1) t.b = 0.0;
    if (unit(rng) < 0.1) t.a = 0.0;
    t.a = std::abs(t.a);  // a = gamma(sigma2 * V) is never negative
    CHECK_NOTHROW(classify_region(t, 0.1 + 10 * unit(rng)));
  }
}
