#include "swarmgear/apf.hpp"

#include "swarmgear/errors.hpp"

namespace swarmgear::swarm {

namespace {
constexpr double kMinDistance = 1e-3;  // floor for pairwise distances, m
}

void ApfParams::validate() const {
  if (!(k_att > 0.0)) {
    throw ConfigError("apf.k_att must be positive");
  }
  if (!(k_rep > 0.0)) {
    throw ConfigError("apf.k_rep must be positive");
  }
  if (!(d0 > 0.0)) {
    throw ConfigError("apf.d0 must be positive");
  }
  if (!(v_max > 0.0)) {
    throw ConfigError("apf.v_max must be positive");
  }
}

Eigen::Vector3d apf_velocity_command(const ApfParams& params, const Eigen::Vector3d& position,
                                     const Eigen::Vector3d& slot,
                                     const std::vector<Eigen::Vector3d>& neighbors) {
  Eigen::Vector3d command = -params.k_att * (position - slot);
  for (const Eigen::Vector3d& other : neighbors) {
    const Eigen::Vector3d away = position - other;
    const double d = std::max(away.norm(), kMinDistance);
    if (d >= params.d0) {
      continue;
    }
    // -grad of 0.5*k_rep*(1/d - 1/d0)^2 with respect to our position.
    const double gain = params.k_rep * (1.0 / d - 1.0 / params.d0) / (d * d);
    command += gain * (away / d);
  }
  const double speed = command.norm();
  if (speed > params.v_max) {
    command *= params.v_max / speed;
  }
  return command;
}

}  // namespace swarmgear::swarm
