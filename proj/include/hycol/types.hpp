#ifndef HYCOL_TYPES_HPP
#define HYCOL_TYPES_HPP

#include <cmath>
#include <limits>
#include <numbers>

namespace hycol {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm_sq(Vec2 v) { return dot(v, v); }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Planar pose of a unicycle. Heading lives on the real line and is never wrapped.
struct RobotState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const RobotState&, const RobotState&) = default;
};

/// Linear and angular velocity command (v, w).
struct ControlInput {
  double v = 0.0;
  double w = 0.0;
  friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

/// Body mass, either a finite positive value or the unbounded (static obstacle) limit.
class Mass {
 public:
  static Mass finite(double kg) { return Mass(kg, false); }
  static Mass unbounded() { return Mass(std::numeric_limits<double>::infinity(), true); }

  bool is_unbounded() const { return unbounded_; }
  /// Only meaningful when finite.
  double kg() const { return kg_; }

  friend bool operator==(const Mass&, const Mass&) = default;

 private:
  Mass(double kg, bool unbounded) : kg_(kg), unbounded_(unbounded) {}
  double kg_;
  bool unbounded_;
};

enum class BodyKind { Robot, Obstacle };

/// A cylindrical uniform rigid body. Obstacles carry theta = 0.
struct Body {
  int id = 0;
  BodyKind kind = BodyKind::Obstacle;
  double radius = 1.0;
  Mass mass = Mass::unbounded();
  RobotState pose;

  bool is_robot() const { return kind == BodyKind::Robot; }
  Vec2 position() const { return pose.position(); }
  friend bool operator==(const Body&, const Body&) = default;
};

/// Wraps an angle into [0, 2pi).
inline double wrap_two_pi(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

/// Wraps an angle into [-pi, pi).
inline double wrap_pi(double angle) {
  double a = wrap_two_pi(angle + kPi) - kPi;
  return a;
}

}  // namespace hycol

#endif  // HYCOL_TYPES_HPP
