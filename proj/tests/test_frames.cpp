#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hycol/errors.hpp"
#include "hycol/frames.hpp"

using namespace hycol;

TEST_CASE("frame orientation examples") {
  LocalFrame f = build_local_frame({0, 0}, {0, 2});
  CHECK(f.phi == doctest::Approx(0.0));
  CHECK(f.origin == Vec2{0, 0});

  f = build_local_frame({0, 0}, {2, 0});
  CHECK(f.phi == doctest::Approx(1.5 * kPi).epsilon(1e-15));
  CHECK(f.y_axis().x == doctest::Approx(1.0));
  CHECK(f.x_axis().y == doctest::Approx(-1.0));

  CHECK_THROWS_AS(build_local_frame({1, 1}, {1, 1}), CoincidentCentersError);
}

TEST_CASE("to_local examples") {
  const LocalFrame id{{0, 0}, 0.0};
  LocalState z = to_local({1, 2, 0.3}, id);
  CHECK(z.x == 1.0);
  CHECK(z.y == 2.0);
  CHECK(z.theta == 0.3);

  const LocalFrame f{{0, 0}, 1.5 * kPi};
  z = to_local({2, 0, 0}, f);
  CHECK(z.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(z.y == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(z.theta == -1.5 * kPi);

  const LocalFrame g{{3, -4}, 0.7};
  z = to_local({3, -4, 2.0}, g);
  CHECK(z.x == 0.0);
  CHECK(z.y == 0.0);
  CHECK(z.theta == doctest::Approx(1.3));
}

TEST_CASE("to_global examples") {
  const LocalFrame f{{0, 0}, 1.5 * kPi};
  RobotState xi = to_global({0, 2, -1.5 * kPi}, f);
  CHECK(std::abs(xi.x - 2.0) < 1e-12);
  CHECK(std::abs(xi.y) < 1e-12);
  CHECK(xi.theta == 0.0);
  xi = to_global({0, 0, 0}, {{5, 5}, 0.0});
  CHECK(xi == RobotState{5, 5, 0});
}

TEST_CASE("velocity decomposition") {
  Vec2 v = decompose_velocity(1, kPi / 2);
  CHECK(std::abs(v.x) < 1e-15);
  CHECK(v.y == 1.0);
  v = decompose_velocity(2, kPi / 6);
  CHECK(v.x == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(v.y == doctest::Approx(1.0).epsilon(1e-15));
  v = decompose_velocity(0, 1.234);
  CHECK(v == Vec2{0, 0});
}

TEST_CASE("property: round trip, isometry, orientation and speed invariance") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> pos(-100.0, 100.0);
  std::uniform_real_distribution<double> ang(-20.0, 20.0);
  std::uniform_real_distribution<double> spd(-10.0, 10.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const Vec2 pi{pos(rng), pos(rng)};
    const Vec2 pj{pos(rng), pos(rng)};
    const LocalFrame f = build_local_frame(pi, pj);
    CHECK(f.phi >= 0.0);
    CHECK(f.phi < kTwoPi);

    const RobotState a{pos(rng), pos(rng), ang(rng)};
    const RobotState b{pos(rng), pos(rng), ang(rng)};
    const RobotState back = to_global(to_local(a, f), f);
    const double scale = std::max(1.0, std::max(std::abs(a.x), std::abs(a.y)));
    CHECK(std::abs(back.x - a.x) <= 1e-12 * scale);
    CHECK(std::abs(back.y - a.y) <= 1e-12 * scale);
    CHECK(std::abs(back.theta - a.theta) <= 1e-12 * std::max(1.0, std::abs(a.theta)));

    const LocalState la = to_local(a, f);
    const LocalState lb = to_local(b, f);
    const double d_local = std::hypot(la.x - lb.x, la.y - lb.y);
    const double d_global = norm(a.position() - b.position());
    CHECK(std::abs(d_local - d_global) <= 1e-12 * std::max(1.0, d_global));

    const LocalState lj = to_local({pj.x, pj.y, 0.0}, f);
    const double d = norm(pj - pi);
    CHECK(std::abs(lj.x) <= 1e-12 * std::max(1.0, d));
    CHECK(std::abs(lj.y - d) <= 1e-12 * std::max(1.0, d));
    CHECK(lj.y > 0.0);

    const double v = spd(rng);
    const Vec2 comp = decompose_velocity(v, a.theta - f.phi);
    CHECK(std::abs(norm(comp) - std::abs(v)) <= 1e-12 * std::max(1.0, std::abs(v)));
  }
}
