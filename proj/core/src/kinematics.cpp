#include "swarmgear/kinematics.hpp"

#include <sstream>
#include <stdexcept>

namespace swarmgear::kinematics {
namespace {

// Tolerance for clamping cos(gamma) near the annulus boundary. Targets whose
// law-of-cosines value falls within this band of +-1 are treated as exactly on
// the boundary instead of being rejected.
constexpr double kCosClamp = 1e-12;

std::string describe_unreachable(const PlanarPoint& target, const PlanarPoint& clamped) {
  std::ostringstream os;
  os << "target (" << target.x << ", " << target.y
     << ") outside reachable annulus; nearest reachable point (" << clamped.x
     << ", " << clamped.y << ")";
  return os.str();
}

}  // namespace

void LegGeometry::validate() const {
  if (!(shoulder > 0.0) || !(upperarm > 0.0) || !(forearm > 0.0) || !(wrist > 0.0)) {
    throw std::invalid_argument("leg geometry: all link lengths must be positive");
  }
}

UnreachableTarget::UnreachableTarget(const PlanarPoint& target, const PlanarPoint& clamped)
    : InfeasibleError(describe_unreachable(target, clamped)),
      target_(target),
      clamped_(clamped) {}

double robot_height(const LegGeometry& geom, double upperarm_angle) {
  if (!(upperarm_angle > 0.0) || !(upperarm_angle < kPi / 2.0)) {
    throw std::domain_error("robot_height: upperarm angle must lie in (0, pi/2)");
  }
  return std::sin(upperarm_angle) * geom.upperarm + geom.forearm;
}

double stride_extreme(const LegGeometry& geom, double height) {
  const double reach = geom.max_reach();
  if (!(height > 0.0) || !(height <= reach)) {
    throw std::domain_error("stride_extreme: height must lie in (0, l_ua + l_fa]");
  }
  return std::sqrt(reach * reach - height * height);
}

PlanarPoint forward_kinematics(const LegGeometry& geom, const JointAngles& angles) {
  const double elbow = angles.upperarm + angles.forearm;
  return {geom.upperarm * std::cos(angles.upperarm) + geom.forearm * std::cos(elbow),
          geom.upperarm * std::sin(angles.upperarm) + geom.forearm * std::sin(elbow)};
}

bool reachable(const LegGeometry& geom, const PlanarPoint& target) {
  const double r = target.norm();
  return r >= geom.min_reach() && r <= geom.max_reach();
}

JointAngles inverse_kinematics(const LegGeometry& geom, const PlanarPoint& target) {
  const double l_ua = geom.upperarm;
  const double l_fa = geom.forearm;
  const double r2 = target.x * target.x + target.y * target.y;

  // Law of cosines for the elbow angle.
  double cos_gamma = (r2 - l_ua * l_ua - l_fa * l_fa) / (2.0 * l_ua * l_fa);
  if (cos_gamma > 1.0 || cos_gamma < -1.0) {
    if (cos_gamma > 1.0 + kCosClamp || cos_gamma < -1.0 - kCosClamp) {
      const double r = std::sqrt(r2);
      PlanarPoint clamped{};
      if (r == 0.0) {
        clamped = {geom.min_reach(), 0.0};
      } else {
        const double bound = cos_gamma > 1.0 ? geom.max_reach() : geom.min_reach();
        clamped = {target.x / r * bound, target.y / r * bound};
      }
      throw UnreachableTarget(target, clamped);
    }
    cos_gamma = cos_gamma > 1.0 ? 1.0 : -1.0;
  }

  // Single elbow branch: forearm angle is non-positive, its sine likewise.
  const double gamma = -std::acos(cos_gamma);
  const double sin_gamma = std::sin(gamma);
  const double beta =
      std::atan2(target.y, target.x) - std::atan2(l_fa * sin_gamma, l_ua + l_fa * cos_gamma);
  return {0.0, beta, gamma};
}

}  // namespace swarmgear::kinematics
