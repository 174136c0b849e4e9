#ifndef HYCOL_REDESIGN_HPP
#define HYCOL_REDESIGN_HPP

#include <optional>
#include <span>

#include "hycol/types.hpp"

namespace hycol {

/// The tangent line, at the collision point, of the circle of radius r_i + r_j about
/// body j, split into two rays at the collision point.
struct TangentRays {
  Vec2 contact_point;
  bool vertical = false;  // body j level with the collision point
  double slope = 0.0;     // only meaningful when !vertical
  Vec2 dir1;              // towards decreasing x (decreasing y when vertical)
  Vec2 dir2;              // towards increasing x (increasing y when vertical)
  double heading1 = 0.0;  // heading of dir1: pi + atan(slope), or 1.5 pi
  double heading2 = 0.0;  // heading of dir2: atan(slope), or 0.5 pi
};

/// Throws GeometryError when |p_ic - p_j| differs from contact_radius by more than 1e-6.
TangentRays tangent_rays(Vec2 p_j, Vec2 p_ic, double contact_radius);

struct EscapeChoice {
  int ray = 1;             // 1 or 2
  double theta_is = 0.0;   // heading of the selected ray
  double phi_sel = 0.0;    // angle between the selected ray and the segment to the target
  double phi_ray1 = 0.0;
  double phi_ray2 = 0.0;
  double heading1 = 0.0;
  double heading2 = 0.0;
};

/// Picks the ray making the smaller angle with the segment from the collision point to
/// the target; ties go to ray 1. Throws GeometryError when the target is the collision point.
EscapeChoice select_escape_heading(const TangentRays& rays, Vec2 target);

struct Deconflicted {
  EscapeChoice first;
  EscapeChoice second;
  int flipped = 0;  // 0 = unchanged, otherwise the index (1 or 2) of the flipped robot
};

/// For a robot-robot impact: if both escape headings coincide, one robot switches to its
/// other ray, choosing the switch with the smaller summed ray angle. Ties flip the second.
Deconflicted deconflict_headings(const EscapeChoice& first, const EscapeChoice& second);

/// Heading increment that resets the post-impact heading to theta_is. No wrapping.
RobotState impulse(double theta_is, double theta_plus);

/// Distance the robot must cover from the collision point before the predefined
/// controller resumes: half the other robot's radius, or the obstacle's radius.
double separation_distance(bool other_is_robot, double other_radius);

/// Time to cover separation_distance at constant speed.
double local_duration(double local_speed, bool other_is_robot, double other_radius);

/// Time at which the trapezoidal integral of uniformly sampled speeds first reaches
/// `distance`, or nullopt if the profile never gets there.
std::optional<double> local_duration_sampled(std::span<const double> speeds, double dt,
                                             double distance);

/// Payload of the local (post-collision) mode.
class LocalPhase {
 public:
  /// Throws Error unless 0 < local_speed <= max_speed and duration > 0.
  LocalPhase(int collided_id, Vec2 contact_point, double theta_is, double local_speed,
             double max_speed, double separation, double start_time);

  int collided_id() const { return collided_id_; }
  Vec2 contact_point() const { return contact_point_; }
  double theta_is() const { return theta_is_; }
  double local_speed() const { return local_speed_; }
  double separation() const { return separation_; }
  double duration() const { return duration_; }
  double start_time() const { return start_time_; }
  /// Scheduled end, including any extensions.
  double end_time() const { return start_time_ + duration_ + extension_; }
  double elapsed(double t) const { return t - start_time_; }
  int extensions() const { return extensions_; }

  /// Adds duration/10 to the phase. Returns false once the total would exceed 10x duration.
  bool extend();

 private:
  int collided_id_;
  Vec2 contact_point_;
  double theta_is_;
  double local_speed_;
  double separation_;
  double duration_;
  double start_time_;
  double extension_ = 0.0;
  int extensions_ = 0;
};

ControlInput local_control(const LocalPhase& phase);

struct BodyPosition {
  int id = 0;
  Vec2 position;
  double radius = 0.0;
};

/// Strict clearance from every other body.
bool separated_from_all(int self_id, Vec2 p, double radius, std::span<const BodyPosition> bodies);

/// Clearance from every other body and |p - p_ic| equal to the phase's separation
/// distance within `tol` (default 1e-6 * max(1, distance)).
bool reactivation_check(int self_id, Vec2 p, double radius, std::span<const BodyPosition> bodies,
                        const LocalPhase& phase, std::optional<double> tol = std::nullopt);

}  // namespace hycol

#endif  // HYCOL_REDESIGN_HPP
