#include "swarmgear/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "swarmgear/errors.hpp"
#include "swarmgear/mathutil.hpp"
#include "swarmgear/units.hpp"

namespace swarmgear::scenario {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void bad_value(const std::string& path, const char* expected) {
  throw ConfigError("config key '" + path + "' must be " + expected);
}

double as_number(const json& node, const std::string& path) {
  if (!node.is_number()) {
    bad_value(path, "a number");
  }
  return node.get<double>();
}

int as_integer(const json& node, const std::string& path) {
  if (!node.is_number_integer()) {
    bad_value(path, "an integer");
  }
  return node.get<int>();
}

bool as_bool(const json& node, const std::string& path) {
  if (!node.is_boolean()) {
    bad_value(path, "a boolean");
  }
  return node.get<bool>();
}

std::string as_string(const json& node, const std::string& path) {
  if (!node.is_string()) {
    bad_value(path, "a string");
  }
  return node.get<std::string>();
}

std::optional<double> as_optional_number(const json& node, const std::string& path) {
  if (node.is_null()) {
    return std::nullopt;
  }
  if (!node.is_number()) {
    bad_value(path, "a number or null");
  }
  return node.get<double>();
}

Eigen::Vector3d as_vector3(const json& node, const std::string& path) {
  if (!node.is_array() || node.size() != 3) {
    bad_value(path, "an array of three numbers");
  }
  Eigen::Vector3d out;
  for (int i = 0; i < 3; ++i) {
    out[i] = as_number(node[static_cast<std::size_t>(i)], path);
  }
  return out;
}

std::vector<Eigen::Vector3d> as_vector3_list(const json& node, const std::string& path) {
  if (!node.is_array()) {
    bad_value(path, "an array of [x, y, z] entries");
  }
  std::vector<Eigen::Vector3d> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(as_vector3(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string join_path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

/// Rejects any key of `doc` that has no counterpart in `schema`.
void check_unknown_keys(const json& doc, const json& schema, const std::string& prefix) {
  for (const auto& item : doc.items()) {
    const std::string path = join_path(prefix, item.key());
    if (!schema.contains(item.key())) {
      throw ConfigError("unknown config key '" + path + "'");
    }
    const json& expected = schema.at(item.key());
    if (expected.is_object()) {
      if (!item.value().is_object()) {
        bad_value(path, "an object");
      }
      check_unknown_keys(item.value(), expected, path);
    }
  }
}

/// Overlays `patch` onto `base`: objects merge recursively, everything else
/// (including null and arrays) replaces the base value.
void deep_merge(ordered_json& base, const json& patch) {
  for (const auto& item : patch.items()) {
    ordered_json& slot = base[item.key()];
    if (slot.is_object() && item.value().is_object()) {
      deep_merge(slot, item.value());
    } else {
      slot = item.value();
    }
  }
}

void collect_leaf_paths(const json& schema, const std::string& prefix,
                        std::vector<std::string>& out) {
  for (const auto& item : schema.items()) {
    const std::string path = join_path(prefix, item.key());
    if (item.value().is_object()) {
      collect_leaf_paths(item.value(), path, out);
    } else {
      out.push_back(path);
    }
  }
}

std::vector<std::string> split_dotted(const std::string& key) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    if (dot == std::string::npos) {
      parts.push_back(key.substr(start));
      break;
    }
    parts.push_back(key.substr(start, dot - start));
    start = dot + 1;
  }
  return parts;
}

ordered_json canonical_schema() { return config_to_json(ScenarioConfig{}); }

}  // namespace

LeaderSource parse_leader_source(const std::string& name) {
  if (name == "scripted") {
    return LeaderSource::scripted;
  }
  if (name == "gait") {
    return LeaderSource::gait;
  }
  throw ConfigError("unknown leader source '" + name + "' (expected 'scripted' or 'gait')");
}

ControllerKind parse_controller_kind(const std::string& name) {
  if (name == "impedance") {
    return ControllerKind::impedance;
  }
  if (name == "apf") {
    return ControllerKind::apf;
  }
  if (name == "hybrid") {
    return ControllerKind::hybrid;
  }
  throw ConfigError("unknown controller '" + name +
                    "' (expected 'impedance', 'apf', or 'hybrid')");
}

std::string to_string(LeaderSource source) {
  return source == LeaderSource::scripted ? "scripted" : "gait";
}

std::string to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::impedance:
      return "impedance";
    case ControllerKind::apf:
      return "apf";
    case ControllerKind::hybrid:
      return "hybrid";
  }
  return "impedance";
}

impedance::ImpedanceParams ImpedanceConfig::resolve() const {
  impedance::ImpedanceParams params;
  params.M = M;
  params.K = K;
  params.K_v = K_v;
  params.D = D ? *D : impedance::solve_critical_damping(M, K);
  return params;
}

std::vector<Eigen::Vector3d> TopologyConfig::effective_offsets() const {
  if (!offsets.empty()) {
    return offsets;
  }
  // Staggered pairs behind the leader: rows 0.8 m apart in x, lanes at
  // y = +/-0.8 m, all at 1 m altitude.
  std::vector<Eigen::Vector3d> out;
  out.reserve(static_cast<std::size_t>(followers));
  for (int i = 1; i <= followers; ++i) {
    const int row = (i + 1) / 2;
    const double lane = (i % 2 == 1) ? 0.8 : -0.8;
    out.emplace_back(-0.8 * row, lane, 1.0);
  }
  return out;
}

void ScenarioConfig::validate() const {
  geometry.validate();
  if (topology.followers < 1) {
    throw ConfigError("topology.followers must be at least 1");
  }
  if (!topology.offsets.empty() &&
      topology.offsets.size() != static_cast<std::size_t>(topology.followers)) {
    throw ConfigError("topology.offsets must be empty or have exactly topology.followers entries");
  }
  if (!(sim.dt > 0.0)) {
    throw ConfigError("sim.dt must be positive");
  }
  if (sim.duration < 0.0) {
    throw ConfigError("sim.duration must be non-negative");
  }
  if (sim.duration > 0.0 && sim.duration < sim.dt) {
    throw ConfigError("sim.duration must be zero or at least sim.dt");
  }
  if (sim.path.shape != "line" && sim.path.shape != "square") {
    throw ConfigError("sim.path.shape must be 'line' or 'square'");
  }
  if (!(sim.path.speed > 0.0)) {
    throw ConfigError("sim.path.speed must be positive");
  }
  if (!(sim.path.length > 0.0)) {
    throw ConfigError("sim.path.length must be positive");
  }
  if (!(sim.path.side > 0.0)) {
    throw ConfigError("sim.path.side must be positive");
  }
  if (sim.disturbance.amplitude < 0.0) {
    throw ConfigError("sim.disturbance.amplitude must be non-negative");
  }
  if (sim.disturbance.frequency < 0.0) {
    throw ConfigError("sim.disturbance.frequency must be non-negative");
  }
  if (sim.disturbance.noise_std < 0.0) {
    throw ConfigError("sim.disturbance.noise_std must be non-negative");
  }
  if (sim.controller == ControllerKind::hybrid) {
    if (!(sim.hybrid.switch_time >= 0.0)) {
      throw ConfigError("sim.hybrid.switch_time must be non-negative");
    }
  }
  if (sim.controller != ControllerKind::apf) {
    impedance::ImpedanceParams resolved = impedance.resolve();
    resolved.validate();
  }
  if (sim.controller != ControllerKind::impedance) {
    apf.validate();
  }
  if (sim.controller == ControllerKind::apf && sim.leader_source == LeaderSource::scripted) {
    // The APF baseline is only meaningful when its speed cap actually binds;
    // otherwise comparisons against the impedance controller are vacuous.
    if (!(apf.v_max < sim.path.speed)) {
      throw ConfigError("apf.v_max must be strictly less than sim.path.speed");
    }
  }
  if (sim.leader_source == LeaderSource::gait) {
    gait.validate(geometry);
    if (std::abs(gait.command_period - sim.dt) > 1e-12) {
      throw ConfigError("sim.dt must equal gait.command_period when the leader walks");
    }
  }
}

ordered_json config_to_json(const ScenarioConfig& config) {
  ordered_json j;
  j["geometry"] = {{"shoulder", config.geometry.shoulder},
                   {"upperarm", config.geometry.upperarm},
                   {"forearm", config.geometry.forearm},
                   {"wrist", config.geometry.wrist}};
  j["gait"] = {{"type", config.gait.gait_type == gait::GaitType::type1 ? 1 : 2},
               {"beta_init_deg", rad_to_deg(config.gait.beta_init)},
               {"step_length", config.gait.step_length},
               {"servo_speed_deg", rad_to_deg(config.gait.servo_speed)},
               {"command_period", config.gait.command_period},
               {"swing_height", config.gait.swing_height},
               {"steps", config.gait.steps},
               {"pause", config.gait.pause ? ordered_json(*config.gait.pause)
                                           : ordered_json(nullptr)}};
  j["impedance"] = {{"M", config.impedance.M},
                    {"D", config.impedance.D ? ordered_json(*config.impedance.D)
                                             : ordered_json(nullptr)},
                    {"K", config.impedance.K},
                    {"K_v", config.impedance.K_v}};
  j["apf"] = {{"k_att", config.apf.k_att},
              {"k_rep", config.apf.k_rep},
              {"d0", config.apf.d0},
              {"v_max", config.apf.v_max}};
  ordered_json offsets = ordered_json::array();
  for (const Eigen::Vector3d& offset : config.topology.offsets) {
    offsets.push_back({offset.x(), offset.y(), offset.z()});
  }
  j["topology"] = {{"kind", topology::to_string(config.topology.kind)},
                   {"followers", config.topology.followers},
                   {"offsets", std::move(offsets)}};
  ordered_json path = {{"shape", config.sim.path.shape},
                       {"length", config.sim.path.length},
                       {"side", config.sim.path.side},
                       {"speed", config.sim.path.speed},
                       {"origin",
                        {config.sim.path.origin.x(), config.sim.path.origin.y(),
                         config.sim.path.origin.z()}},
                       {"heading_deg", rad_to_deg(config.sim.path.heading)}};
  ordered_json disturbance = {{"enabled", config.sim.disturbance.enabled},
                              {"amplitude", config.sim.disturbance.amplitude},
                              {"frequency", config.sim.disturbance.frequency},
                              {"noise_std", config.sim.disturbance.noise_std}};
  j["sim"] = {{"dt", config.sim.dt},
              {"duration", config.sim.duration},
              {"leader", to_string(config.sim.leader_source)},
              {"controller", to_string(config.sim.controller)},
              {"path", std::move(path)},
              {"disturbance", std::move(disturbance)},
              {"hybrid", {{"switch_time", config.sim.hybrid.switch_time}}},
              {"spawn_shift",
               {config.sim.spawn_shift.x(), config.sim.spawn_shift.y(),
                config.sim.spawn_shift.z()}}};
  return j;
}

ScenarioConfig parse_config(const json& document) {
  if (!document.is_object()) {
    throw ConfigError("config root must be a JSON object");
  }
  const ordered_json schema = canonical_schema();
  check_unknown_keys(document, schema, "");
  ordered_json merged = schema;
  deep_merge(merged, document);

  ScenarioConfig config;
  {
    const json& g = merged.at("geometry");
    config.geometry.shoulder = as_number(g.at("shoulder"), "geometry.shoulder");
    config.geometry.upperarm = as_number(g.at("upperarm"), "geometry.upperarm");
    config.geometry.forearm = as_number(g.at("forearm"), "geometry.forearm");
    config.geometry.wrist = as_number(g.at("wrist"), "geometry.wrist");
  }
  {
    const json& g = merged.at("gait");
    const int type = as_integer(g.at("type"), "gait.type");
    if (type != 1 && type != 2) {
      throw ConfigError("gait.type must be 1 or 2");
    }
    config.gait.gait_type = type == 1 ? gait::GaitType::type1 : gait::GaitType::type2;
    config.gait.beta_init = deg_to_rad(as_number(g.at("beta_init_deg"), "gait.beta_init_deg"));
    config.gait.step_length = as_number(g.at("step_length"), "gait.step_length");
    config.gait.servo_speed =
        deg_to_rad(as_number(g.at("servo_speed_deg"), "gait.servo_speed_deg"));
    config.gait.command_period = as_number(g.at("command_period"), "gait.command_period");
    config.gait.swing_height = as_number(g.at("swing_height"), "gait.swing_height");
    config.gait.steps = as_integer(g.at("steps"), "gait.steps");
    config.gait.pause = as_optional_number(g.at("pause"), "gait.pause");
  }
  {
    const json& g = merged.at("impedance");
    config.impedance.M = as_number(g.at("M"), "impedance.M");
    config.impedance.D = as_optional_number(g.at("D"), "impedance.D");
    config.impedance.K = as_number(g.at("K"), "impedance.K");
    config.impedance.K_v = as_number(g.at("K_v"), "impedance.K_v");
  }
  {
    const json& g = merged.at("apf");
    config.apf.k_att = as_number(g.at("k_att"), "apf.k_att");
    config.apf.k_rep = as_number(g.at("k_rep"), "apf.k_rep");
    config.apf.d0 = as_number(g.at("d0"), "apf.d0");
    config.apf.v_max = as_number(g.at("v_max"), "apf.v_max");
  }
  {
    const json& g = merged.at("topology");
    config.topology.kind = topology::parse_topology_kind(as_string(g.at("kind"), "topology.kind"));
    config.topology.followers = as_integer(g.at("followers"), "topology.followers");
    config.topology.offsets = as_vector3_list(g.at("offsets"), "topology.offsets");
  }
  {
    const json& g = merged.at("sim");
    config.sim.dt = as_number(g.at("dt"), "sim.dt");
    config.sim.duration = as_number(g.at("duration"), "sim.duration");
    config.sim.leader_source = parse_leader_source(as_string(g.at("leader"), "sim.leader"));
    config.sim.controller = parse_controller_kind(as_string(g.at("controller"), "sim.controller"));
    const json& p = g.at("path");
    config.sim.path.shape = as_string(p.at("shape"), "sim.path.shape");
    config.sim.path.length = as_number(p.at("length"), "sim.path.length");
    config.sim.path.side = as_number(p.at("side"), "sim.path.side");
    config.sim.path.speed = as_number(p.at("speed"), "sim.path.speed");
    config.sim.path.origin = as_vector3(p.at("origin"), "sim.path.origin");
    config.sim.path.heading = deg_to_rad(as_number(p.at("heading_deg"), "sim.path.heading_deg"));
    const json& d = g.at("disturbance");
    config.sim.disturbance.enabled = as_bool(d.at("enabled"), "sim.disturbance.enabled");
    config.sim.disturbance.amplitude = as_number(d.at("amplitude"), "sim.disturbance.amplitude");
    config.sim.disturbance.frequency = as_number(d.at("frequency"), "sim.disturbance.frequency");
    config.sim.disturbance.noise_std = as_number(d.at("noise_std"), "sim.disturbance.noise_std");
    config.sim.hybrid.switch_time =
        as_number(g.at("hybrid").at("switch_time"), "sim.hybrid.switch_time");
    config.sim.spawn_shift = as_vector3(g.at("spawn_shift"), "sim.spawn_shift");
  }
  config.validate();
  return config;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  json document;
  try {
    document = json::parse(stream);
  } catch (const json::parse_error& error) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + error.what());
  }
  return parse_config(document);
}

void apply_override(ordered_json& document, const std::string& assignment) {
  const auto equals = assignment.find('=');
  if (equals == std::string::npos || equals == 0) {
    throw ConfigError("override '" + assignment + "' must have the form key.path=value");
  }
  const std::string key = assignment.substr(0, equals);
  const std::string value_text = assignment.substr(equals + 1);

  const ordered_json schema = canonical_schema();
  const std::vector<std::string> parts = split_dotted(key);
  const ordered_json* node = &schema;
  for (const std::string& part : parts) {
    if (!node->is_object() || !node->contains(part)) {
      std::string valid;
      for (const std::string& candidate : valid_override_keys()) {
        if (!valid.empty()) {
          valid += ", ";
        }
        valid += candidate;
      }
      throw ConfigError("unknown override key '" + key + "'; valid keys: " + valid);
    }
    node = &node->at(part);
  }
  if (node->is_object()) {
    throw ConfigError("override key '" + key + "' names a section, not a value");
  }

  json value;
  try {
    value = json::parse(value_text);
  } catch (const json::parse_error&) {
    value = value_text;  // bare words become strings, e.g. topology.kind=ring
  }

  ordered_json* target = &document;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    target = &(*target)[parts[i]];
    if (!target->is_object()) {
      *target = ordered_json::object();
    }
  }
  (*target)[parts.back()] = value;
}

std::vector<std::string> valid_override_keys() {
  std::vector<std::string> keys;
  collect_leaf_paths(canonical_schema(), "", keys);
  return keys;
}

std::string config_hash(const ScenarioConfig& config, std::uint64_t seed) {
  const std::string canonical = config_to_json(config).dump() + ":" + std::to_string(seed);
  const std::uint64_t digest = mathutil::fnv1a(canonical);
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << digest;
  return out.str();
}

}  // namespace swarmgear::scenario
