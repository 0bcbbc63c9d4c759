#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swarmgear/scenario.hpp"

namespace swarmgear::sim {

/// Position/velocity of one agent at one tick. Agent 0 is the leader;
/// followers are 1..N in topology order.
struct AgentSample {
  Eigen::Vector3d position{0.0, 0.0, 0.0};
  Eigen::Vector3d velocity{0.0, 0.0, 0.0};
};

/// Complete time history of one run. Samples and references are stored
/// row-major as tick * n_agents + agent; a follower's reference is its
/// formation slot built from the clean (undisturbed) leader path.
struct TrajectoryLog {
  double dt = 0.025;
  int n_agents = 0;
  std::vector<double> times;
  std::vector<AgentSample> samples;
  std::vector<Eigen::Vector3d> references;
  std::vector<double> leader_yaw;  // heading of the leader's motion, rad
  std::string config_digest;       // stamped into output file headers

  std::size_t n_ticks() const { return times.size(); }
  std::size_t index(std::size_t tick, int agent) const {
    return tick * static_cast<std::size_t>(n_agents) + static_cast<std::size_t>(agent);
  }
  const AgentSample& sample(std::size_t tick, int agent) const {
    return samples[index(tick, agent)];
  }
  const Eigen::Vector3d& reference(std::size_t tick, int agent) const {
    return references[index(tick, agent)];
  }
};

/// Runs the configured scenario to completion. Deterministic: the same
/// config and seed always produce the same log, bit for bit. Throws
/// DivergenceError (with the tick index) if any follower state stops being
/// finite.
TrajectoryLog run_simulation(const scenario::ScenarioConfig& config, std::uint64_t seed);

/// Columns: time_s,agent_id,x_m,y_m,z_m,vx_mps,vy_mps,vz_mps,
/// ref_x_m,ref_y_m,ref_z_m. A "# config_hash=..." comment precedes the
/// header. Numbers use shortest round-trip formatting.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);

/// Inverse of write_trajectory_csv (leader yaw is not part of the file and
/// comes back empty). Throws ConfigError on malformed or empty input.
TrajectoryLog read_trajectory_csv(std::istream& in);

}  // namespace swarmgear::sim
