#include "hycol/redesign.hpp"

#include <algorithm>
#include <cmath>

#include "hycol/errors.hpp"

namespace hycol {

namespace {

constexpr double kOnCircleTolerance = 1e-6;
constexpr double kLevelTolerance = 1e-9;
constexpr double kTieTolerance = 1e-9;

double angle_between(Vec2 a, Vec2 b) {
  return std::atan2(std::abs(a.x * b.y - a.y * b.x), dot(a, b));
}

bool same_heading(double a, double b) {
  const double d = wrap_two_pi(a - b);
  return d <= kTieTolerance || kTwoPi - d <= kTieTolerance;
}

EscapeChoice with_ray(EscapeChoice c, int ray) {
  c.ray = ray;
  c.theta_is = ray == 1 ? c.heading1 : c.heading2;
  c.phi_sel = ray == 1 ? c.phi_ray1 : c.phi_ray2;
  return c;
}

}  // namespace

TangentRays tangent_rays(Vec2 p_j, Vec2 p_ic, double contact_radius) {
  const double d = norm(p_ic - p_j);
  if (std::abs(d - contact_radius) > kOnCircleTolerance)
    throw GeometryError("collision point is not on the contact circle");
  TangentRays rays;
  rays.contact_point = p_ic;
  if (std::abs(p_j.y - p_ic.y) <= kLevelTolerance) {
    rays.vertical = true;
    rays.dir1 = {0.0, -1.0};
    rays.dir2 = {0.0, 1.0};
    rays.heading1 = 1.5 * kPi;
    rays.heading2 = 0.5 * kPi;
  } else {
    rays.slope = -(p_j.x - p_ic.x) / (p_j.y - p_ic.y);
    const double len = std::hypot(1.0, rays.slope);
    rays.dir2 = {1.0 / len, rays.slope / len};
    rays.dir1 = {-rays.dir2.x, -rays.dir2.y};
    rays.heading1 = kPi + std::atan(rays.slope);
    rays.heading2 = std::atan(rays.slope);
  }
  return rays;
}

EscapeChoice select_escape_heading(const TangentRays& rays, Vec2 target) {
  const Vec2 seg = target - rays.contact_point;
  if (norm(seg) < 1e-12) throw GeometryError("target coincides with the collision point");
  EscapeChoice c;
  c.heading1 = rays.heading1;
  c.heading2 = rays.heading2;
  c.phi_ray1 = angle_between(seg, rays.dir1);
  c.phi_ray2 = kPi - c.phi_ray1;
  const bool first = c.phi_ray1 <= c.phi_ray2 || std::abs(c.phi_ray1 - c.phi_ray2) <= kTieTolerance;
  return with_ray(c, first ? 1 : 2);
}

Deconflicted deconflict_headings(const EscapeChoice& first, const EscapeChoice& second) {
  if (!same_heading(first.theta_is, second.theta_is)) return {first, second, 0};
  const EscapeChoice first_flipped = with_ray(first, first.ray == 1 ? 2 : 1);
  const EscapeChoice second_flipped = with_ray(second, second.ray == 1 ? 2 : 1);
  const double cost_flip_first = first_flipped.phi_sel + second.phi_sel;
  const double cost_flip_second = first.phi_sel + second_flipped.phi_sel;
  if (cost_flip_first < cost_flip_second) return {first_flipped, second, 1};
  return {first, second_flipped, 2};
}

RobotState impulse(double theta_is, double theta_plus) { return {0.0, 0.0, theta_is - theta_plus}; }

double separation_distance(bool other_is_robot, double other_radius) {
  return other_is_robot ? 0.5 * other_radius : other_radius;
}

double local_duration(double local_speed, bool other_is_robot, double other_radius) {
  return separation_distance(other_is_robot, other_radius) / local_speed;
}

std::optional<double> local_duration_sampled(std::span<const double> speeds, double dt,
                                             double distance) {
  double covered = 0.0;
  for (std::size_t k = 1; k < speeds.size(); ++k) {
    const double step = 0.5 * (speeds[k - 1] + speeds[k]) * dt;
    if (covered + step >= distance && step > 0.0) {
      // Speed is linear within the interval; solve the quadratic for the crossing.
      const double v0 = speeds[k - 1];
      const double slope = (speeds[k] - v0) / dt;
      const double need = distance - covered;
      double tau;
      if (std::abs(slope) < 1e-15) {
        tau = need / v0;
      } else {
        tau = (-v0 + std::sqrt(std::max(0.0, v0 * v0 + 2.0 * slope * need))) / slope;
      }
      return static_cast<double>(k - 1) * dt + std::clamp(tau, 0.0, dt);
    }
    covered += step;
  }
  return std::nullopt;
}

LocalPhase::LocalPhase(int collided_id, Vec2 contact_point, double theta_is, double local_speed,
                       double max_speed, double separation, double start_time)
    : collided_id_(collided_id),
      contact_point_(contact_point),
      theta_is_(theta_is),
      local_speed_(local_speed),
      separation_(separation),
      duration_(0.0),
      start_time_(start_time) {
  if (!(local_speed > 0.0 && local_speed <= max_speed))
    throw Error("local controller speed must lie in (0, max_v]");
  if (!(separation > 0.0)) throw Error("separation distance must be positive");
  duration_ = separation / local_speed;
}

bool LocalPhase::extend() {
  if (duration_ + extension_ + 0.1 * duration_ > 10.0 * duration_ * (1.0 + 1e-12)) return false;
  ++extensions_;
  extension_ = 0.1 * duration_ * extensions_;
  return true;
}

ControlInput local_control(const LocalPhase& phase) { return {phase.local_speed(), 0.0}; }

bool separated_from_all(int self_id, Vec2 p, double radius, std::span<const BodyPosition> bodies) {
  for (const BodyPosition& b : bodies) {
    if (b.id == self_id) continue;
    if (!(norm(p - b.position) > radius + b.radius)) return false;
  }
  return true;
}

bool reactivation_check(int self_id, Vec2 p, double radius, std::span<const BodyPosition> bodies,
                        const LocalPhase& phase, std::optional<double> tol) {
  const double distance = phase.separation();
  const double tolerance = tol.value_or(1e-6 * std::max(1.0, distance));
  if (!separated_from_all(self_id, p, radius, bodies)) return false;
  return std::abs(norm(p - phase.contact_point()) - distance) <= tolerance;
}

}  // namespace hycol
