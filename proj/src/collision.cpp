#include "hycol/collision.hpp"

#include <cmath>
#include <string>

#include "hycol/errors.hpp"

namespace hycol {

namespace {

constexpr double kHeadingMatchTolerance = 1e-9;

double nearest_representative(double angle, double reference) {
  return reference + wrap_pi(angle - reference);
}

bool same_direction(double a, double b) {
  const double d = wrap_two_pi(a - b);
  return d <= kHeadingMatchTolerance || kTwoPi - d <= kHeadingMatchTolerance;
}

BodyOutcome finish(const ContactBody& body, const LocalFrame& f, double lambda) {
  BodyOutcome out;
  out.id = body.id;
  out.theta_pre = body.heading;
  out.speed_pre = body.speed;
  out.normal_pre = normal_velocity(body, f);
  out.mu = body.speed * std::cos(body.heading - f.phi);
  out.lambda = lambda;
  const PostVelocity post = post_velocity(out.lambda, out.mu, f.phi, body.heading);
  out.theta_plus = nearest_representative(post.heading, body.heading);
  out.speed_plus = post.speed;
  // Direction of travel before the impact; a reversing unicycle moves against its heading.
  const double travel_pre = body.speed < 0.0 ? body.heading + kPi : body.heading;
  out.redesign_needed =
      !(body.speed != 0.0 && post.speed != 0.0 && same_direction(post.heading, travel_pre));
  return out;
}

}  // namespace

ContactQuery make_contact_query(const ContactBody& i, const ContactBody& j) {
  ContactQuery q{i, j, build_local_frame(i.position, j.position)};
  if (!q.j.is_robot) {
    q.j.speed = 0.0;
    q.j.heading = 0.0;
  }
  return q;
}

double normal_velocity(const ContactBody& b, const LocalFrame& f) {
  return decompose_velocity(b.speed, b.heading - f.phi).y;
}

ContactKind check_collision(const ContactQuery& q, double tol) {
  const double d = norm(q.j.position - q.i.position);
  const double reach = q.i.radius + q.j.radius;
  if (d < reach - tol)
    throw OverlapError("bodies " + std::to_string(q.i.id) + " and " + std::to_string(q.j.id) +
                       " interpenetrate by " + std::to_string(reach - d) + " m");
  if (std::abs(d - reach) > tol) return ContactKind::Flow;
  return normal_velocity(q.i, q.frame) > normal_velocity(q.j, q.frame) ? ContactKind::Jump
                                                                       : ContactKind::Flow;
}

NormalVelocities resolve_normal(Mass m_i, Mass m_j, double v_iy, double v_jy, double delta_i,
                                double delta_j) {
  if (m_i.is_unbounded() && m_j.is_unbounded())
    throw Error("resolve_normal: both bodies have unbounded mass");
  NormalVelocities out;
  if (m_j.is_unbounded()) {
    out.v_i = (1.0 - delta_i) * (-v_iy + 2.0 * v_jy);
    out.v_j = v_jy;
  } else if (m_i.is_unbounded()) {
    out.v_i = v_iy;
    out.v_j = (1.0 - delta_j) * (-v_jy + 2.0 * v_iy);
  } else {
    const double mi = m_i.kg();
    const double mj = m_j.kg();
    const double sum = mi + mj;
    out.v_i = (1.0 - delta_i) * ((mi - mj) / sum * v_iy + 2.0 * mj / sum * v_jy);
    out.v_j = (1.0 - delta_j) * ((mj - mi) / sum * v_jy + 2.0 * mi / sum * v_iy);
  }
  return out;
}

PostVelocity post_velocity(double lambda, double mu, double phi, double prev_heading) {
  if (lambda == 0.0 && mu == 0.0) return {prev_heading, 0.0};
  return {phi + std::atan2(lambda, mu), std::hypot(lambda, mu)};
}

CollisionOutcome resolve_collision(const ContactQuery& q, double delta_i, double delta_j) {
  const double v_iy = normal_velocity(q.i, q.frame);
  const double v_jy = normal_velocity(q.j, q.frame);
  // A finite-mass obstacle gets a post-impact velocity here, but obstacles never
  // integrate dynamics, so only the robot side of the result is kept for them.
  const NormalVelocities n = resolve_normal(q.i.mass, q.j.mass, v_iy, v_jy, delta_i, delta_j);

  CollisionOutcome out;
  out.frame = q.frame;
  out.i = finish(q.i, q.frame, n.v_i);
  if (q.j.is_robot) out.j = finish(q.j, q.frame, n.v_j);
  return out;
}

}  // namespace hycol
