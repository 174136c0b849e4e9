#include "hycol/controller.hpp"

#include <cmath>
#include <string>

#include "hycol/errors.hpp"

namespace hycol {

namespace {

bool degenerate(double denom) { return std::abs(denom) < kDenominatorGuard; }

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

const Body* find_body(int id, std::span<const Body> bodies) {
  for (const Body& b : bodies)
    if (b.id == id) return &b;
  return nullptr;
}

}  // namespace

const char* to_string(Region r) {
  switch (r) {
    case Region::Omega1: return "omega1";
    case Region::Omega2: return "omega2";
    case Region::Omega3: return "omega3";
    case Region::Omega4: return "omega4";
  }
  return "unknown";
}

double clf_value(const RobotState& xi, const RobotState& target) {
  const double dx = xi.x - target.x;
  const double dy = xi.y - target.y;
  const double dth = xi.theta - target.theta;
  return 0.5 * (dx * dx + dy * dy + dth * dth);
}

double cbf_value(int robot_id, std::span<const Body> bodies) {
  const Body* self = find_body(robot_id, bodies);
  if (self == nullptr) throw Error("cbf_value: unknown robot id " + std::to_string(robot_id));
  double h = 0.0;
  for (const Body& other : bodies) {
    if (other.id == robot_id) continue;
    const double reach = self->radius + other.radius;
    // The inter-robot term is shared by both robots; it is |p1 - p2|^2 - (r1 + r2)^2.
    h += norm_sq(self->position() - other.position()) - reach * reach;
  }
  return h;
}

Vec2 cbf_gradient(int robot_id, std::span<const Body> bodies) {
  const Body* self = find_body(robot_id, bodies);
  if (self == nullptr) throw Error("cbf_gradient: unknown robot id " + std::to_string(robot_id));
  Vec2 g;
  for (const Body& other : bodies) {
    if (other.id == robot_id) continue;
    g = g + 2.0 * (self->position() - other.position());
  }
  return g;
}

LieDerivatives lie_derivatives(int robot_id, const RobotState& xi, const RobotState& target,
                               std::span<const Body> bodies) {
  const double ct = std::cos(xi.theta);
  const double st = std::sin(xi.theta);
  LieDerivatives d;
  d.c = (xi.x - target.x) * ct + (xi.y - target.y) * st;
  d.s = xi.theta - target.theta;
  Vec2 grad;
  for (const Body& other : bodies) {
    if (other.id == robot_id) continue;
    grad = grad + 2.0 * (xi.position() - other.position());
  }
  d.e = grad.x * ct + grad.y * st;
  return d;
}

double gamma(double x, double sigma1) { return x >= 0.0 ? sigma1 * x : x; }

ControllerTerms evaluate_terms(int robot_id, const RobotState& xi, const RobotState& target,
                               std::span<const Body> bodies, const ControllerParams& params) {
  ControllerTerms t;
  t.V = clf_value(xi, target);
  const Body* self = find_body(robot_id, bodies);
  if (self == nullptr) throw Error("evaluate_terms: unknown robot id " + std::to_string(robot_id));
  for (const Body& other : bodies) {
    if (other.id == robot_id) continue;
    const double reach = self->radius + other.radius;
    t.h += norm_sq(xi.position() - other.position()) - reach * reach;
  }
  t.a = gamma(params.sigma2 * t.V, params.sigma1);
  t.b = params.sigma3 * t.h;
  const LieDerivatives d = lie_derivatives(robot_id, xi, target, bodies);
  t.c = d.c;
  t.s = d.s;
  t.e = d.e;
  return t;
}

Region classify_region(const ControllerTerms& t, double rho) {
  const double cs = t.c * t.c + t.s * t.s;
  const bool cs_degenerate = degenerate(cs);
  const bool e_degenerate = degenerate(t.e);
  // Upper bound on b shared by Omega2 (strict, from below) and Omega4 (from above).
  // With c^2 + s^2 degenerate the bound is taken as 0, so Omega2 reduces to b > 0.
  const double b_bound = cs_degenerate ? 0.0 : rho * t.e * t.c * t.a / ((rho + 1.0) * cs);
  // a-threshold c*b/e. With e degenerate Omega3 cannot be entered and the first
  // Omega4 inequality is vacuous; both branches would output (0,0) anyway.
  const double a_bound = e_degenerate ? 0.0 : t.c * t.b / t.e;

  if (t.a < 0.0 && t.b > 0.0) return Region::Omega1;
  if (t.a >= 0.0 && t.b > b_bound) return Region::Omega2;
  if (!e_degenerate && t.a < a_bound && t.b <= 0.0) return Region::Omega3;
  if ((e_degenerate || t.a >= a_bound) && t.b <= b_bound) return Region::Omega4;
  throw NoRegionError("no controller region matches a=" + std::to_string(t.a) +
                      " b=" + std::to_string(t.b) + " c=" + std::to_string(t.c) +
                      " s=" + std::to_string(t.s) + " e=" + std::to_string(t.e));
}

NominalControl nominal_control(const ControllerTerms& t, Region r, double rho) {
  NominalControl out;
  switch (r) {
    case Region::Omega1:
      break;
    case Region::Omega2: {
      const double cs = t.c * t.c + t.s * t.s;
      if (degenerate(cs)) {
        out.degenerate = true;
        break;
      }
      const double k = -rho / (rho + 1.0);
      out.u = {k * t.a * t.c / cs, k * t.a * t.s / cs};
      break;
    }
    case Region::Omega3:
      if (degenerate(t.e)) {
        out.degenerate = true;
        break;
      }
      out.u = {-t.b / t.e, 0.0};
      break;
    case Region::Omega4: {
      if (degenerate(t.e)) {
        out.degenerate = true;
        break;
      }
      out.u.v = -t.b / t.e;
      const double denom = t.c * t.c / rho + (rho + 1.0) / rho * t.s * t.s;
      if (degenerate(denom)) {
        // v keeps the barrier active; only the turning term is dropped.
        out.degenerate = true;
        out.u.w = 0.0;
      } else {
        out.u.w = (t.b * t.c - t.a * t.e) / denom * (t.s / t.e);
      }
      break;
    }
  }
  return out;
}

ControlInput saturate(ControlInput u, double max_v, double max_w) {
  if (std::abs(u.v) > max_v) u.v = max_v * sgn(u.v);
  if (std::abs(u.w) > max_w) u.w = max_w * sgn(u.w);
  return u;
}

ControlOutput predefined_control(int robot_id, const RobotState& xi, const RobotState& target,
                                 std::span<const Body> bodies, const ControllerParams& params) {
  ControlOutput out;
  out.terms = evaluate_terms(robot_id, xi, target, bodies, params);
  // With nothing else in the workspace the barrier is an empty sum and imposes no
  // constraint; only the CLF branch applies.
  const bool alone = bodies.size() == 1 && bodies[0].id == robot_id;
  out.region = alone ? Region::Omega2 : classify_region(out.terms, params.rho);
  const NominalControl nom = nominal_control(out.terms, out.region, params.rho);
  out.nominal = nom.u;
  out.degenerate = nom.degenerate;
  out.u = saturate(nom.u, params.max_v, params.max_w);
  return out;
}

}  // namespace hycol
