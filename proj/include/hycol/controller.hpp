#ifndef HYCOL_CONTROLLER_HPP
#define HYCOL_CONTROLLER_HPP

#include <span>

#include "hycol/scenario.hpp"
#include "hycol/types.hpp"

namespace hycol {

/// Magnitude below which a division in the closed-form controller is treated as degenerate.
inline constexpr double kDenominatorGuard = 1e-9;

/// Scalar terms the closed-form CLF-CBF controller is built from.
struct ControllerTerms {
  double V = 0.0;  // CLF value
  double h = 0.0;  // CBF value
  double a = 0.0;  // gamma(sigma2 * V)
  double b = 0.0;  // sigma3 * h
  double c = 0.0;  // first component of (Lg V)^T
  double s = 0.0;  // second component of (Lg V)^T
  double e = 0.0;  // first component of (Lg h)^T
};

enum class Region { Omega1, Omega2, Omega3, Omega4 };

const char* to_string(Region r);

struct LieDerivatives {
  double c = 0.0;
  double s = 0.0;
  double e = 0.0;
};

struct NominalControl {
  ControlInput u;
  bool degenerate = false;
};

struct ControlOutput {
  ControlInput u;          // saturated, always inside the input box
  ControlInput nominal;    // before saturation
  Region region = Region::Omega2;
  ControllerTerms terms;
  bool degenerate = false;
};

/// 0.5 * |xi - xi_d|^2 with the raw (unwrapped) heading difference.
double clf_value(const RobotState& xi, const RobotState& target);

/// Summed barrier for robot `robot_id`: inter-robot clearance (when a second robot is
/// present) plus the clearance to every obstacle. Positions are read from `bodies`.
double cbf_value(int robot_id, std::span<const Body> bodies);

/// Gradient of cbf_value with respect to the robot's own position.
Vec2 cbf_gradient(int robot_id, std::span<const Body> bodies);

/// (c, s) = (Lg V)^T and e = first component of (Lg h)^T, evaluated at `xi`.
/// Robot `robot_id`'s own position is taken from `xi`, everything else from `bodies`.
LieDerivatives lie_derivatives(int robot_id, const RobotState& xi, const RobotState& target,
                               std::span<const Body> bodies);

/// gamma(x) = sigma1 * x for x >= 0, x otherwise.
double gamma(double x, double sigma1);

ControllerTerms evaluate_terms(int robot_id, const RobotState& xi, const RobotState& target,
                               std::span<const Body> bodies, const ControllerParams& params);

/// First-match classification in the order Omega1, Omega2, Omega3, Omega4.
/// Throws NoRegionError when nothing matches.
Region classify_region(const ControllerTerms& t, double rho);

NominalControl nominal_control(const ControllerTerms& t, Region r, double rho);

ControlInput saturate(ControlInput u, double max_v, double max_w);

/// Full pipeline: terms, region, nominal branch, saturation. A robot alone in the
/// workspace has no barrier and always takes the Omega2 branch.
ControlOutput predefined_control(int robot_id, const RobotState& xi, const RobotState& target,
                                 std::span<const Body> bodies, const ControllerParams& params);

}  // namespace hycol

#endif  // HYCOL_CONTROLLER_HPP
