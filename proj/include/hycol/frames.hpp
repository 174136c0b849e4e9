#ifndef HYCOL_FRAMES_HPP
#define HYCOL_FRAMES_HPP

#include "hycol/types.hpp"

namespace hycol {

/// Pairwise frame centred on body i whose +y axis points at body j and whose
/// +x axis is that direction rotated clockwise by a quarter turn.
struct LocalFrame {
  Vec2 origin;
  double phi = 0.0;  // angle of the local x axis, in [0, 2pi)

  Vec2 x_axis() const;
  Vec2 y_axis() const;
};

struct LocalState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

/// Throws CoincidentCentersError when |p_j - p_i| < 1e-12.
LocalFrame build_local_frame(Vec2 p_i, Vec2 p_j);

LocalState to_local(const RobotState& xi, const LocalFrame& f);
RobotState to_global(const LocalState& zeta, const LocalFrame& f);

/// (v cos(heading), v sin(heading)); heading measured from the local x axis.
Vec2 decompose_velocity(double speed, double heading_in_frame);

}  // namespace hycol

#endif  // HYCOL_FRAMES_HPP
