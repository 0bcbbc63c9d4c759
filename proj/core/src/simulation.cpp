#include "swarmgear/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "swarmgear/csv.hpp"
#include "swarmgear/errors.hpp"
#include "swarmgear/gait.hpp"
#include "swarmgear/topology.hpp"
#include "swarmgear/units.hpp"

namespace swarmgear::sim {

namespace {

constexpr const char* kTrajectoryHeader =
    "time_s,agent_id,x_m,y_m,z_m,vx_mps,vy_mps,vz_mps,ref_x_m,ref_y_m,ref_z_m";

struct LeaderSample {
  Eigen::Vector3d position{0.0, 0.0, 0.0};
  Eigen::Vector3d velocity{0.0, 0.0, 0.0};
  double yaw = 0.0;
};

Eigen::Vector3d heading_dir(double yaw) { return {std::cos(yaw), std::sin(yaw), 0.0}; }

/// Scripted reference: a straight line of `length` or one counterclockwise
/// lap of a square of `side`, traversed once at constant speed; the leader
/// then holds the end position.
class ScriptedPath {
 public:
  explicit ScriptedPath(const scenario::PathConfig& path) {
    if (path.shape == "line") {
      lengths_ = {path.length};
      headings_ = {path.heading};
    } else {
      lengths_ = {path.side, path.side, path.side, path.side};
      headings_ = {path.heading, path.heading + kPi / 2.0, path.heading + kPi,
                   path.heading + 1.5 * kPi};
    }
    speed_ = path.speed;
    Eigen::Vector3d p = path.origin;
    total_ = 0.0;
    for (std::size_t i = 0; i < lengths_.size(); ++i) {
      starts_.push_back(p);
      p += lengths_[i] * heading_dir(headings_[i]);
      total_ += lengths_[i];
    }
    end_ = p;
  }

  LeaderSample at(double t) const {
    LeaderSample sample;
    double s = speed_ * t;
    if (s >= total_) {
      sample.position = end_;
      sample.yaw = headings_.back();
      return sample;
    }
    std::size_t seg = 0;
    while (seg + 1 < lengths_.size() && s >= lengths_[seg]) {
      s -= lengths_[seg];
      ++seg;
    }
    const Eigen::Vector3d dir = heading_dir(headings_[seg]);
    sample.position = starts_[seg] + s * dir;
    sample.velocity = speed_ * dir;
    sample.yaw = headings_[seg];
    return sample;
  }

 private:
  std::vector<double> lengths_;
  std::vector<double> headings_;
  std::vector<Eigen::Vector3d> starts_;
  Eigen::Vector3d end_{0.0, 0.0, 0.0};
  double speed_ = 0.0;
  double total_ = 0.0;
};

/// Walking reference: body trajectory of a gait plan, rotated to the path
/// heading and anchored at the path origin. After the plan ends the leader
/// stands still.
class GaitLeaderPath {
 public:
  GaitLeaderPath(const scenario::ScenarioConfig& config)
      : plan_(config.gait.gait_type == gait::GaitType::type1
                  ? gait::type1_plan(config.geometry, config.gait)
                  : gait::type2_plan(config.geometry, config.gait)),
        origin_(config.sim.path.origin),
        heading_(config.sim.path.heading) {}

  LeaderSample at_tick(std::size_t k) const {
    const std::size_t last = plan_.ticks.size() - 1;
    const std::size_t i = std::min(k, last);
    const gait::BodyPose& body = plan_.ticks[i].body;
    LeaderSample sample;
    sample.position = origin_ + rotate(body.x, body.y);
    if (i < last) {
      const gait::BodyPose& next = plan_.ticks[i + 1].body;
      sample.velocity = rotate(next.x - body.x, next.y - body.y) / plan_.command_period;
    }
    sample.yaw = heading_ + body.yaw;
    return sample;
  }

 private:
  Eigen::Vector3d rotate(double x, double y) const {
    return {x * std::cos(heading_) - y * std::sin(heading_),
            x * std::sin(heading_) + y * std::cos(heading_), 0.0};
  }

  gait::GaitPlan plan_;
  Eigen::Vector3d origin_;
  double heading_;
};

}  // namespace

TrajectoryLog run_simulation(const scenario::ScenarioConfig& config, std::uint64_t seed) {
  config.validate();

  const int n_followers = config.topology.followers;
  const std::vector<Eigen::Vector3d> offsets = config.topology.effective_offsets();
  const topology::TopologyGraph graph =
      topology::build_topology(config.topology.kind, n_followers, offsets);

  const double dt = config.sim.dt;
  const std::size_t n_steps =
      config.sim.duration == 0.0
          ? 0
          : std::max<std::size_t>(
                1, static_cast<std::size_t>(std::floor(config.sim.duration / dt + 1e-9)));

  std::optional<ScriptedPath> scripted;
  std::optional<GaitLeaderPath> walking;
  if (config.sim.leader_source == scenario::LeaderSource::scripted) {
    scripted.emplace(config.sim.path);
  } else {
    walking.emplace(config);
  }
  const auto clean_at = [&](std::size_t k) {
    return scripted ? scripted->at(static_cast<double>(k) * dt) : walking->at_tick(k);
  };

  // Per-follower link structure: how many leader-coupled links touch the
  // follower, and which other followers it shares spring-damper links with.
  std::vector<int> leader_links(static_cast<std::size_t>(n_followers), 0);
  std::vector<std::vector<int>> peers(static_cast<std::size_t>(n_followers));
  for (const topology::Link& link : graph.links) {
    if (link.leader_coupled) {
      const int follower = (link.agent_a == 0 ? link.agent_b : link.agent_a) - 1;
      ++leader_links[static_cast<std::size_t>(follower)];
    } else {
      const int a = link.agent_a - 1;
      const int b = link.agent_b - 1;
      peers[static_cast<std::size_t>(a)].push_back(b);
      peers[static_cast<std::size_t>(b)].push_back(a);
    }
  }

  const bool uses_impedance = config.sim.controller != scenario::ControllerKind::apf;
  std::optional<impedance::DiscreteImpedance> disc;
  impedance::ImpedanceParams imp_params;
  if (uses_impedance) {
    imp_params = config.impedance.resolve();
    disc = impedance::discretize(imp_params, dt);
  }
  bool impedance_active =
      config.sim.controller == scenario::ControllerKind::impedance ||
      (config.sim.controller == scenario::ControllerKind::hybrid &&
       config.sim.hybrid.switch_time <= 0.0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const scenario::DisturbanceConfig& dist = config.sim.disturbance;
  const auto disturb = [&](double t, LeaderSample sample) {
    if (dist.enabled) {
      const Eigen::Vector3d lateral(-std::sin(sample.yaw), std::cos(sample.yaw), 0.0);
      const double phase = 2.0 * kPi * dist.frequency * t;
      sample.position += dist.amplitude * std::sin(phase) * lateral;
      sample.velocity += dist.amplitude * 2.0 * kPi * dist.frequency * std::cos(phase) * lateral;
      if (dist.noise_std > 0.0) {
        for (int axis = 0; axis < 3; ++axis) {
          sample.position[axis] += dist.noise_std * normal(rng);
        }
      }
    }
    return sample;
  };

  const std::size_t nf = static_cast<std::size_t>(n_followers);
  std::vector<Eigen::Vector3d> lag(nf, Eigen::Vector3d::Zero());
  std::vector<Eigen::Vector3d> rate(nf, Eigen::Vector3d::Zero());
  std::vector<Eigen::Vector3d> pos(nf, Eigen::Vector3d::Zero());
  std::vector<Eigen::Vector3d> vel(nf, Eigen::Vector3d::Zero());

  TrajectoryLog log;
  log.dt = dt;
  log.n_agents = 1 + n_followers;
  log.times.reserve(n_steps + 1);
  log.samples.reserve((n_steps + 1) * static_cast<std::size_t>(log.n_agents));
  log.references.reserve(log.samples.capacity());
  log.leader_yaw.reserve(n_steps + 1);

  double last_yaw = 0.0;
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const LeaderSample clean = clean_at(k);
    const LeaderSample actual = disturb(t, clean);

    if (k == 0) {
      last_yaw = clean.yaw;
      for (std::size_t i = 0; i < nf; ++i) {
        pos[i] = clean.position + offsets[i] + config.sim.spawn_shift;
        vel[i].setZero();
        lag[i] = actual.position + offsets[i] - pos[i];
        rate[i] = actual.velocity;
      }
    }
    if (config.sim.controller == scenario::ControllerKind::hybrid && !impedance_active &&
        t >= config.sim.hybrid.switch_time) {
      // Hand over from the approach controller: seed the link states from
      // wherever the potential field left each follower.
      impedance_active = true;
      for (std::size_t i = 0; i < nf; ++i) {
        lag[i] = actual.position + offsets[i] - pos[i];
        rate[i] = actual.velocity - vel[i];
      }
    }
    if (impedance_active) {
      for (std::size_t i = 0; i < nf; ++i) {
        pos[i] = actual.position + offsets[i] - lag[i];
        vel[i] = actual.velocity - rate[i];
      }
    }

    const double planar_speed = actual.velocity.head<2>().norm();
    if (planar_speed > 1e-12) {
      last_yaw = std::atan2(actual.velocity.y(), actual.velocity.x());
    }
    log.times.push_back(t);
    log.leader_yaw.push_back(last_yaw);
    log.samples.push_back({actual.position, actual.velocity});
    log.references.push_back(clean.position);
    for (std::size_t i = 0; i < nf; ++i) {
      log.samples.push_back({pos[i], vel[i]});
      log.references.push_back(clean.position + offsets[i]);
    }

    if (k == n_steps) {
      break;
    }

    if (impedance_active) {
      std::vector<Eigen::Vector3d> force(nf, Eigen::Vector3d::Zero());
      for (std::size_t i = 0; i < nf; ++i) {
        force[i] = static_cast<double>(leader_links[i]) * imp_params.K_v * actual.velocity;
        for (const int j : peers[i]) {
          const std::size_t other = static_cast<std::size_t>(j);
          force[i] += imp_params.K * (lag[other] - lag[i]) +
                      imp_params.D * (rate[other] - rate[i]);
        }
      }
      for (std::size_t i = 0; i < nf; ++i) {
        Eigen::Vector3d next_lag;
        Eigen::Vector3d next_rate;
        for (int axis = 0; axis < 3; ++axis) {
          impedance::LinkState state{lag[i][axis], rate[i][axis]};
          state = impedance::step(*disc, state, force[i][axis]);
          next_lag[axis] = state.disp;
          next_rate[axis] = state.vel;
        }
        lag[i] = next_lag;
        rate[i] = next_rate;
        if (!lag[i].allFinite() || !rate[i].allFinite()) {
          throw DivergenceError("follower " + std::to_string(i + 1) + " state diverged",
                                static_cast<std::int64_t>(k + 1));
        }
      }
    } else {
      // Potential-field step: commands computed from a synchronous snapshot
      // of all agent positions, then applied kinematically.
      std::vector<Eigen::Vector3d> command(nf, Eigen::Vector3d::Zero());
      for (std::size_t i = 0; i < nf; ++i) {
        std::vector<Eigen::Vector3d> neighbors;
        neighbors.reserve(nf);
        neighbors.push_back(actual.position);
        for (std::size_t j = 0; j < nf; ++j) {
          if (j != i) {
            neighbors.push_back(pos[j]);
          }
        }
        command[i] = swarm::apf_velocity_command(config.apf, pos[i],
                                                 actual.position + offsets[i], neighbors);
      }
      for (std::size_t i = 0; i < nf; ++i) {
        pos[i] += command[i] * dt;
        vel[i] = command[i];
        if (!pos[i].allFinite()) {
          throw DivergenceError("follower " + std::to_string(i + 1) + " state diverged",
                                static_cast<std::int64_t>(k + 1));
        }
      }
    }
  }
  return log;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
  out << "# config_hash=" << log.config_digest << "\n";
  out << kTrajectoryHeader << "\n";
  for (std::size_t k = 0; k < log.n_ticks(); ++k) {
    for (int agent = 0; agent < log.n_agents; ++agent) {
      const AgentSample& s = log.sample(k, agent);
      const Eigen::Vector3d& ref = log.reference(k, agent);
      out << csv::format_double(log.times[k]) << ',' << agent;
      for (int axis = 0; axis < 3; ++axis) {
        out << ',' << csv::format_double(s.position[axis]);
      }
      for (int axis = 0; axis < 3; ++axis) {
        out << ',' << csv::format_double(s.velocity[axis]);
      }
      for (int axis = 0; axis < 3; ++axis) {
        out << ',' << csv::format_double(ref[axis]);
      }
      out << '\n';
    }
  }
}

TrajectoryLog read_trajectory_csv(std::istream& in) {
  TrajectoryLog log;
  std::string line;
  bool header_seen = false;
  int max_agent = -1;
  std::vector<double> row_times;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    if (line.rfind("# config_hash=", 0) == 0) {
      log.config_digest = line.substr(std::string("# config_hash=").size());
      continue;
    }
    if (line.front() == '#') {
      continue;
    }
    if (!header_seen) {
      if (line != kTrajectoryHeader) {
        throw ConfigError("trajectory CSV header mismatch: got '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const std::vector<std::string_view> fields = csv::split_fields(line);
    if (fields.size() != 11) {
      throw ConfigError("trajectory CSV row has " + std::to_string(fields.size()) +
                        " fields, expected 11");
    }
    row_times.push_back(csv::parse_double(fields[0]));
    const int agent = static_cast<int>(csv::parse_int(fields[1]));
    max_agent = std::max(max_agent, agent);
    AgentSample sample;
    for (int axis = 0; axis < 3; ++axis) {
      sample.position[axis] = csv::parse_double(fields[static_cast<std::size_t>(2 + axis)]);
      sample.velocity[axis] = csv::parse_double(fields[static_cast<std::size_t>(5 + axis)]);
    }
    Eigen::Vector3d ref;
    for (int axis = 0; axis < 3; ++axis) {
      ref[axis] = csv::parse_double(fields[static_cast<std::size_t>(8 + axis)]);
    }
    log.samples.push_back(sample);
    log.references.push_back(ref);
  }
  if (log.samples.empty()) {
    throw ConfigError("trajectory CSV contains no samples");
  }
  log.n_agents = max_agent + 1;
  if (log.samples.size() % static_cast<std::size_t>(log.n_agents) != 0) {
    throw ConfigError("trajectory CSV is truncated: row count is not a multiple of agent count");
  }
  const std::size_t n_ticks = log.samples.size() / static_cast<std::size_t>(log.n_agents);
  log.times.reserve(n_ticks);
  for (std::size_t k = 0; k < n_ticks; ++k) {
    log.times.push_back(row_times[k * static_cast<std::size_t>(log.n_agents)]);
  }
  if (n_ticks >= 2) {
    log.dt = log.times[1] - log.times[0];
  }
  return log;
}

}  // namespace swarmgear::sim
