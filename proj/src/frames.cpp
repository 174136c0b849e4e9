#include "hycol/frames.hpp"

#include <cmath>

#include "hycol/errors.hpp"

namespace hycol {

Vec2 LocalFrame::x_axis() const { return {std::cos(phi), std::sin(phi)}; }
Vec2 LocalFrame::y_axis() const { return {-std::sin(phi), std::cos(phi)}; }

LocalFrame build_local_frame(Vec2 p_i, Vec2 p_j) {
  const Vec2 d = p_j - p_i;
  const double len = norm(d);
  if (len < 1e-12) throw CoincidentCentersError("local frame needs distinct body centres");
  const Vec2 y_unit = (1.0 / len) * d;
  // Clockwise quarter turn: (a, b) -> (b, -a).
  const Vec2 x_unit{y_unit.y, -y_unit.x};
  return LocalFrame{p_i, wrap_two_pi(std::atan2(x_unit.y, x_unit.x))};
}

LocalState to_local(const RobotState& xi, const LocalFrame& f) {
  const double c = std::cos(f.phi);
  const double s = std::sin(f.phi);
  const double dx = xi.x - f.origin.x;
  const double dy = xi.y - f.origin.y;
  return LocalState{c * dx + s * dy, -s * dx + c * dy, xi.theta - f.phi};
}

RobotState to_global(const LocalState& zeta, const LocalFrame& f) {
  const double c = std::cos(f.phi);
  const double s = std::sin(f.phi);
  return RobotState{c * zeta.x - s * zeta.y + f.origin.x, s * zeta.x + c * zeta.y + f.origin.y,
                    zeta.theta + f.phi};
}

Vec2 decompose_velocity(double speed, double heading_in_frame) {
  return {speed * std::cos(heading_in_frame), speed * std::sin(heading_in_frame)};
}

}  // namespace hycol
