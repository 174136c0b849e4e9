#ifndef HYCOL_COLLISION_HPP
#define HYCOL_COLLISION_HPP

#include <optional>

#include "hycol/frames.hpp"
#include "hycol/types.hpp"

namespace hycol {

inline constexpr double kContactTolerance = 1e-9;

/// One side of a contact. Static bodies carry speed = heading = 0.
struct ContactBody {
  int id = 0;
  Vec2 position;
  double radius = 1.0;
  Mass mass = Mass::unbounded();
  double speed = 0.0;
  double heading = 0.0;
  bool is_robot = false;
};

/// Contact between robot i and body j, expressed in the frame built from p_i towards p_j.
struct ContactQuery {
  ContactBody i;
  ContactBody j;
  LocalFrame frame;
};

/// Builds the query and its frame. Throws CoincidentCentersError for coincident centres.
ContactQuery make_contact_query(const ContactBody& i, const ContactBody& j);

enum class ContactKind { Flow, Jump };

/// Normal (local y) velocity of a body in the query frame.
double normal_velocity(const ContactBody& b, const LocalFrame& f);

/// Jump iff the bodies touch within `tol` and i approaches j along the local y axis.
/// Throws OverlapError when the bodies interpenetrate by more than `tol`.
ContactKind check_collision(const ContactQuery& q, double tol = kContactTolerance);

struct NormalVelocities {
  double v_i = 0.0;
  double v_j = 0.0;
};

/// Post-impact normal velocities from momentum and energy balance along the normal,
/// scaled by (1 - delta) per body. An unbounded mass keeps its velocity and the other
/// side takes the exact infinite-mass limit.
NormalVelocities resolve_normal(Mass m_i, Mass m_j, double v_iy, double v_jy, double delta_i,
                                double delta_j = 0.0);

struct PostVelocity {
  double heading = 0.0;  // global
  double speed = 0.0;    // always >= 0
};

/// Recomposes local components (mu along x, lambda along y) into a nonnegative speed and
/// a global heading phi + atan2(lambda, mu). A zero vector keeps `prev_heading`.
PostVelocity post_velocity(double lambda, double mu, double phi, double prev_heading);

struct BodyOutcome {
  int id = 0;
  double theta_pre = 0.0;
  double speed_pre = 0.0;
  /// Post-impact heading, taken as the representative nearest theta_pre.
  double theta_plus = 0.0;
  double speed_plus = 0.0;
  double lambda = 0.0;  // post-impact local y velocity
  double mu = 0.0;      // local x velocity (unchanged by the impact)
  double normal_pre = 0.0;
  /// False when the direction of motion survives the impact unchanged.
  bool redesign_needed = true;
};

struct CollisionOutcome {
  LocalFrame frame;
  BodyOutcome i;
  std::optional<BodyOutcome> j;  // present when j is a robot
};

/// Resolves a contact classified as Jump. Positions and angular velocities are untouched;
/// only headings and speeds change. A non-robot j is treated as static before and after.
CollisionOutcome resolve_collision(const ContactQuery& q, double delta_i, double delta_j = 0.0);

}  // namespace hycol

#endif  // HYCOL_COLLISION_HPP
