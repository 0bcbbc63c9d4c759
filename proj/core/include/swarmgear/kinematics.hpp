#pragma once

#include <cmath>

#include "swarmgear/errors.hpp"
#include "swarmgear/units.hpp"

namespace swarmgear::kinematics {

/// Link lengths of one pedipulator, meters. Defaults are the leader drone's
/// measured values. Only the upperarm and forearm enter the sagittal-plane
/// equations; shoulder and wrist lengths are carried for completeness.
struct LegGeometry {
  double shoulder = 0.093;
  double upperarm = 0.154;
  double forearm = 0.206;
  double wrist = 0.044;

  double max_reach() const { return upperarm + forearm; }
  double min_reach() const { return std::abs(upperarm - forearm); }

  /// Throws std::invalid_argument unless all lengths are strictly positive.
  void validate() const;
};

/// One leg's joint angles, radians.
///   yaw      - shoulder rotation about the vertical axis (alpha)
///   upperarm - in-plane angle of the upperarm from the horizontal x axis (beta)
///   forearm  - in-plane angle of the forearm relative to the upperarm (gamma),
///              always <= 0 under the single elbow convention used here
struct JointAngles {
  double yaw = 0.0;
  double upperarm = 0.0;
  double forearm = 0.0;
};

/// Symmetric joint limit applied to every joint, radians. Default +-pi.
struct JointLimits {
  double min_angle = -kPi;
  double max_angle = kPi;

  bool contains(double angle) const {
    return angle >= min_angle && angle <= max_angle;
  }
  bool contains(const JointAngles& a) const {
    return contains(a.yaw) && contains(a.upperarm) && contains(a.forearm);
  }
};

/// Point in the leg's sagittal plane, meters. Origin at the hip attachment,
/// x horizontal (outward along the leg plane), y vertical, positive up.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
};

/// Thrown when an inverse-kinematics target lies outside the reachable
/// annulus. Carries the nearest reachable point on the annulus boundary.
class UnreachableTarget : public InfeasibleError {
 public:
  UnreachableTarget(const PlanarPoint& target, const PlanarPoint& clamped);

  const PlanarPoint& target() const { return target_; }
  const PlanarPoint& clamped() const { return clamped_; }

 private:
  PlanarPoint target_;
  PlanarPoint clamped_;
};

/// Standing height of the hip above the ground for a given initial upperarm
/// angle, assuming a vertical forearm: H = sin(beta) * l_ua + l_fa.
/// Throws std::domain_error unless upperarm_angle is in (0, pi/2).
double robot_height(const LegGeometry& geom, double upperarm_angle);

/// Horizontal distance from the hip's ground projection to the foot of a
/// fully straightened limb held at height H: x0 = sqrt((l_ua+l_fa)^2 - H^2).
/// Throws std::domain_error if the height is not in (0, l_ua + l_fa].
double stride_extreme(const LegGeometry& geom, double height);

/// Planar position of the foot for given in-plane joint angles.
PlanarPoint forward_kinematics(const LegGeometry& geom, const JointAngles& angles);

/// Closed-form two-link inverse kinematics with the elbow-one-sided branch
/// (forearm angle <= 0). Yaw is returned as zero. Throws UnreachableTarget
/// for points outside the annulus [|l_ua - l_fa|, l_ua + l_fa]; cos(gamma)
/// values within 1e-12 of +-1 are clamped rather than rejected.
JointAngles inverse_kinematics(const LegGeometry& geom, const PlanarPoint& target);

/// True if the target lies in the reachable annulus (closed, exact bounds).
bool reachable(const LegGeometry& geom, const PlanarPoint& target);

}  // namespace swarmgear::kinematics
