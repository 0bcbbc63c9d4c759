#pragma once

#include <vector>

#include <Eigen/Dense>

namespace swarmgear::swarm {

/// Artificial-potential-field baseline: quadratic attraction toward the
/// formation slot plus short-range repulsion between agents, emitted as a
/// speed-capped velocity command.
struct ApfParams {
  double k_att = 2.0;   // attraction gain, 1/s
  double k_rep = 0.05;  // repulsion gain, m^3/s
  double d0 = 0.6;      // repulsion influence radius, m
  double v_max = 0.12;  // speed cap, m/s

  /// Throws ConfigError unless all parameters are positive.
  void validate() const;
};

/// Velocity command for one follower: negative gradient of
///   0.5 k_att |p - slot|^2  +  sum over neighbors within d0 of
///   0.5 k_rep (1/d - 1/d0)^2,
/// clamped to v_max. Distances are floored at 1e-3 m to keep the repulsion
/// finite.
Eigen::Vector3d apf_velocity_command(const ApfParams& params, const Eigen::Vector3d& position,
                                     const Eigen::Vector3d& slot,
                                     const std::vector<Eigen::Vector3d>& neighbors);

}  // namespace swarmgear::swarm
