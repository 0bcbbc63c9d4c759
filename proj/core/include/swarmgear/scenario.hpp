#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "swarmgear/apf.hpp"
#include "swarmgear/gait.hpp"
#include "swarmgear/impedance.hpp"
#include "swarmgear/kinematics.hpp"
#include "swarmgear/topology.hpp"

namespace swarmgear::scenario {

/// How the leader reference trajectory is produced.
enum class LeaderSource {
  scripted,  // analytic path (line / square) at constant speed
  gait,      // body trajectory of a gait plan (walking leader)
};

/// Which follower controller runs the swarm.
enum class ControllerKind {
  impedance,  // virtual mass-spring-damper links
  apf,        // artificial-potential-field baseline
  hybrid,     // APF approach phase, then impedance after switch_time
};

LeaderSource parse_leader_source(const std::string& name);
ControllerKind parse_controller_kind(const std::string& name);
std::string to_string(LeaderSource source);
std::string to_string(ControllerKind kind);

/// Scripted leader path. `shape` is "line" (length along heading) or
/// "square" (perimeter loop of the given side with rounded corners handled
/// by arc-length parameterization).
struct PathConfig {
  std::string shape = "line";
  double length = 1.0;    // line length, m
  double side = 1.0;      // square side, m
  double speed = 0.1;     // constant path speed, m/s
  Eigen::Vector3d origin{0.0, 0.0, 0.0};
  double heading = 0.0;   // radians, stored internally; degrees in JSON
};

/// Lateral sinusoid plus optional Gaussian noise applied to the leader's
/// actual motion (the reference stays clean).
struct DisturbanceConfig {
  bool enabled = false;
  double amplitude = 0.02;  // m
  double frequency = 1.5;   // Hz
  double noise_std = 0.0;   // m, per-axis white noise
};

/// Hybrid controller schedule: APF until switch_time, impedance afterwards.
struct HybridConfig {
  double switch_time = 5.0;  // s
};

struct SimConfig {
  double dt = 0.025;       // control/sample period, s
  double duration = 10.0;  // total simulated time, s (0 = initial state only)
  LeaderSource leader_source = LeaderSource::scripted;
  ControllerKind controller = ControllerKind::impedance;
  PathConfig path;
  DisturbanceConfig disturbance;
  HybridConfig hybrid;
  /// Initial follower displacement from their formation slots, m.
  Eigen::Vector3d spawn_shift{0.0, 0.0, 0.0};
};

/// Impedance parameters as configured; D may be omitted (null) to request
/// the exact critical damping for (M, K).
struct ImpedanceConfig {
  double M = 1.9;
  std::optional<double> D = 12.6;  // null -> 2*sqrt(K*M)
  double K = 20.88;
  double K_v = 12.6;

  impedance::ImpedanceParams resolve() const;
};

struct TopologyConfig {
  topology::TopologyKind kind = topology::TopologyKind::star;
  int followers = 3;
  /// Formation slots relative to the leader, m. Empty -> staggered default
  /// pattern two abreast behind the leader at 1 m altitude.
  std::vector<Eigen::Vector3d> offsets;

  std::vector<Eigen::Vector3d> effective_offsets() const;
};

/// Full scenario description: one JSON document, strictly validated.
struct ScenarioConfig {
  kinematics::LegGeometry geometry;
  gait::GaitParams gait;
  ImpedanceConfig impedance;
  swarm::ApfParams apf;
  TopologyConfig topology;
  SimConfig sim;

  /// Cross-field checks beyond per-struct validation. Throws ConfigError.
  void validate() const;
};

/// Canonical JSON form (all keys present, insertion-ordered, angles in
/// degrees). parse_config(config_to_json(c)) reproduces an equivalent
/// config; the dump is the deterministic input to config_hash.
nlohmann::ordered_json config_to_json(const ScenarioConfig& config);

/// Strict parse: every key must exist in the canonical schema; unknown keys
/// raise ConfigError naming the offending path. Missing keys keep defaults.
ScenarioConfig parse_config(const nlohmann::json& document);

/// Reads and parses a JSON file. Throws ConfigError on I/O or syntax errors.
ScenarioConfig load_config_file(const std::string& path);

/// Applies one "dotted.path=value" assignment onto a JSON document. The path
/// must name a scalar or array leaf of the canonical schema; values parse as
/// JSON with a string fallback. Throws ConfigError for unknown keys, listing
/// the valid ones.
void apply_override(nlohmann::ordered_json& document, const std::string& assignment);

/// All scalar/array leaf paths of the canonical schema, dotted.
std::vector<std::string> valid_override_keys();

/// 16-hex-digit FNV-1a hash of the canonical config dump plus the seed;
/// stamped on every output file so results are traceable to their inputs.
std::string config_hash(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace swarmgear::scenario
