// swarmgear CLI: run scenarios, sweep parameters, compare controllers and
// topologies, export gait traces, and validate configs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "swarmgear/analysis.hpp"
#include "swarmgear/csv.hpp"
#include "swarmgear/errors.hpp"
#include "swarmgear/gait.hpp"
#include "swarmgear/scenario.hpp"
#include "swarmgear/simulation.hpp"
#include "swarmgear/units.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace swarmgear;

namespace {

constexpr const char* kUsage = R"(usage: swarmgear <verb> [options]

verbs:
  run              simulate one scenario; writes trajectory.csv + metrics.json
  sweep            run the cartesian product of --sweep value lists
  compare          run >=2 scenarios on one reference path; merged metrics table
  gait-trace       export dense foot trajectories and the joint-angle schedule
  validate-config  parse, validate, and echo the canonical config + hash

options:
  --config PATH    scenario config file (JSON)
  --out DIR        output directory (default: out)
  --set key=value  override a config entry by dotted path (repeatable)
  --seed N         random seed for disturbance noise (default: 0)
  --topology NAME  compare variant: star, ring, tree, or apf (repeatable)
  --sweep key=v1,v2,...  sweep axis (repeatable)
  --quiet          suppress informational output
  --help           show this message
)";

struct CliArgs {
  std::string verb;
  std::vector<std::string> config_paths;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::vector<std::string> topologies;
  std::vector<std::string> sweeps;
  std::uint64_t seed = 0;
  bool quiet = false;
  bool help = false;
};

CliArgs parse_args(int argc, char** argv) {
  CliArgs args;
  int i = 1;
  if (i < argc && argv[i][0] != '-') {
    args.verb = argv[i++];
  }
  const auto need_value = [&](const std::string& flag) -> std::string {
    if (i >= argc) {
      throw ConfigError("flag " + flag + " needs a value");
    }
    return argv[i++];
  };
  while (i < argc) {
    const std::string flag = argv[i++];
    if (flag == "--config") {
      args.config_paths.push_back(need_value(flag));
    } else if (flag == "--out") {
      args.out_dir = need_value(flag);
    } else if (flag == "--set") {
      args.overrides.push_back(need_value(flag));
    } else if (flag == "--topology") {
      args.topologies.push_back(need_value(flag));
    } else if (flag == "--sweep") {
      args.sweeps.push_back(need_value(flag));
    } else if (flag == "--seed") {
      const std::string text = need_value(flag);
      try {
        args.seed = std::stoull(text);
      } catch (const std::exception&) {
        throw ConfigError("--seed expects a non-negative integer, got '" + text + "'");
      }
    } else if (flag == "--quiet") {
      args.quiet = true;
    } else if (flag == "--help" || flag == "-h") {
      args.help = true;
    } else {
      throw ConfigError("unknown flag '" + flag + "' (see --help)");
    }
  }
  return args;
}

std::string single_config_path(const CliArgs& args) {
  if (args.config_paths.size() != 1) {
    throw ConfigError("this verb needs exactly one --config");
  }
  return args.config_paths.front();
}

ordered_json load_config_document(const std::string& path) {
  if (path.empty()) {
    throw ConfigError("--config is required for this verb");
  }
  std::ifstream stream(path);
  if (!stream) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  try {
    return ordered_json::parse(stream);
  } catch (const json::parse_error& error) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + error.what());
  }
}

scenario::ScenarioConfig materialize(ordered_json document,
                                     const std::vector<std::string>& overrides) {
  for (const std::string& assignment : overrides) {
    scenario::apply_override(document, assignment);
  }
  return scenario::parse_config(document);
}

/// Writes a fully composed text atomically enough for our purposes: the
/// content exists in memory before the file is opened, so a failed run
/// leaves no partial outputs.
void write_file(const fs::path& path, const std::string& content) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) {
    throw ConfigError("cannot write output file '" + path.string() + "'");
  }
  stream << content;
  if (!stream) {
    throw ConfigError("failed while writing '" + path.string() + "'");
  }
}

std::string config_stem(const std::string& path) {
  const std::string stem = fs::path(path).stem().string();
  return stem.empty() ? "scenario" : stem;
}

struct RunArtifacts {
  scenario::ScenarioConfig config;
  std::string hash;
  sim::TrajectoryLog log;
};

RunArtifacts execute(const ordered_json& document, const std::vector<std::string>& overrides,
                     std::uint64_t seed) {
  RunArtifacts artifacts;
  artifacts.config = materialize(document, overrides);
  artifacts.hash = scenario::config_hash(artifacts.config, seed);
  artifacts.log = sim::run_simulation(artifacts.config, seed);
  artifacts.log.config_digest = artifacts.hash;
  return artifacts;
}

std::string metrics_document(const RunArtifacts& artifacts, std::uint64_t seed) {
  ordered_json j;
  j["config_hash"] = artifacts.hash;
  j["seed"] = seed;
  const ordered_json body = analysis::log_metrics_json(artifacts.log);
  for (const auto& item : body.items()) {
    j[item.key()] = item.value();
  }
  return j.dump(2) + "\n";
}

std::string trajectory_document(const sim::TrajectoryLog& log) {
  std::ostringstream out;
  sim::write_trajectory_csv(out, log);
  return out.str();
}

void print_run_table(std::ostream& out, const std::string& label, const sim::TrajectoryLog& log) {
  std::vector<std::pair<std::string, analysis::PathMetrics>> rows;
  rows.emplace_back(label + "/leader", analysis::agent_metrics(log, 0));
  for (int agent = 1; agent < log.n_agents; ++agent) {
    rows.emplace_back(label + "/f" + std::to_string(agent), analysis::agent_metrics(log, agent));
  }
  if (log.n_agents >= 2) {
    rows.emplace_back(label + "/followers", analysis::followers_overall(log));
  }
  out << analysis::render_table(rows);
}

int cmd_run(const CliArgs& args) {
  const std::string config_path = single_config_path(args);
  const ordered_json document = load_config_document(config_path);
  const RunArtifacts artifacts = execute(document, args.overrides, args.seed);
  const std::string trajectory = trajectory_document(artifacts.log);
  const std::string metrics = metrics_document(artifacts, args.seed);

  fs::create_directories(args.out_dir);
  write_file(fs::path(args.out_dir) / "trajectory.csv", trajectory);
  write_file(fs::path(args.out_dir) / "metrics.json", metrics);
  if (!args.quiet) {
    print_run_table(std::cout, config_stem(config_path), artifacts.log);
    std::cout << "wrote " << (fs::path(args.out_dir) / "trajectory.csv").string() << " and "
              << (fs::path(args.out_dir) / "metrics.json").string() << " (config_hash "
              << artifacts.hash << ")\n";
  }
  return 0;
}

int cmd_sweep(const CliArgs& args) {
  if (args.sweeps.empty()) {
    throw ConfigError("sweep needs at least one --sweep key=v1,v2,... axis");
  }
  struct Axis {
    std::string key;
    std::vector<std::string> values;
  };
  std::vector<Axis> axes;
  for (const std::string& axis_spec : args.sweeps) {
    const auto equals = axis_spec.find('=');
    if (equals == std::string::npos || equals == 0 || equals + 1 >= axis_spec.size()) {
      throw ConfigError("sweep axis '" + axis_spec + "' must have the form key=v1,v2,...");
    }
    Axis axis;
    axis.key = axis_spec.substr(0, equals);
    std::string values = axis_spec.substr(equals + 1);
    std::string::size_type start = 0;
    while (true) {
      const auto comma = values.find(',', start);
      axis.values.push_back(values.substr(start, comma - start));
      if (comma == std::string::npos) {
        break;
      }
      start = comma + 1;
    }
    axes.push_back(std::move(axis));
  }

  const std::string config_path = single_config_path(args);
  const ordered_json document = load_config_document(config_path);
  std::vector<std::size_t> cursor(axes.size(), 0);
  ordered_json index;
  index["base_config"] = config_path;
  index["seed"] = args.seed;
  index["runs"] = ordered_json::array();
  std::size_t run_id = 0;
  bool done = false;
  while (!done) {
    std::vector<std::string> overrides = args.overrides;
    ordered_json combo;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      overrides.push_back(axes[a].key + "=" + axes[a].values[cursor[a]]);
      combo[axes[a].key] = axes[a].values[cursor[a]];
    }
    const RunArtifacts artifacts = execute(document, overrides, args.seed);

    char name[32];
    std::snprintf(name, sizeof(name), "sweep_%03zu", run_id);
    const fs::path run_dir = fs::path(args.out_dir) / name;
    fs::create_directories(run_dir);
    write_file(run_dir / "trajectory.csv", trajectory_document(artifacts.log));
    write_file(run_dir / "metrics.json", metrics_document(artifacts, args.seed));

    ordered_json entry;
    entry["dir"] = name;
    entry["overrides"] = combo;
    entry["config_hash"] = artifacts.hash;
    if (artifacts.log.n_agents >= 2) {
      entry["followers_rmse"] = analysis::followers_overall(artifacts.log).rmse;
    }
    index["runs"].push_back(std::move(entry));
    if (!args.quiet) {
      std::cout << name << ": " << combo.dump() << " (config_hash " << artifacts.hash << ")\n";
    }

    ++run_id;
    done = true;
    for (std::size_t a = axes.size(); a-- > 0;) {
      if (++cursor[a] < axes[a].values.size()) {
        done = false;
        break;
      }
      cursor[a] = 0;
    }
  }
  write_file(fs::path(args.out_dir) / "sweep_index.json", index.dump(2) + "\n");
  return 0;
}

int cmd_compare(const CliArgs& args) {
  struct Variant {
    std::string label;
    ordered_json document;
    std::vector<std::string> extra_overrides;
  };
  std::vector<Variant> variants;
  if (args.config_paths.size() > 1) {
    if (!args.topologies.empty()) {
      throw ConfigError("compare takes either several --config files or one --config "
                        "with --topology variants, not both");
    }
    for (const std::string& path : args.config_paths) {
      variants.push_back({config_stem(path), load_config_document(path), {}});
    }
  } else {
    const ordered_json document = load_config_document(single_config_path(args));
    for (const std::string& name : args.topologies) {
      if (name == "apf") {
        variants.push_back({"apf", document, {"sim.controller=apf"}});
      } else if (name == "star" || name == "ring" || name == "tree") {
        variants.push_back(
            {name, document, {"topology.kind=" + name, "sim.controller=impedance"}});
      } else {
        throw ConfigError("unknown --topology '" + name +
                          "' (expected star, ring, tree, or apf)");
      }
    }
  }
  if (variants.size() < 2) {
    throw ConfigError("compare needs at least 2 scenarios (repeat --config or --topology)");
  }

  std::vector<RunArtifacts> runs;
  for (const Variant& variant : variants) {
    std::vector<std::string> overrides = args.overrides;
    overrides.insert(overrides.end(), variant.extra_overrides.begin(),
                     variant.extra_overrides.end());
    runs.push_back(execute(variant.document, overrides, args.seed));
  }

  // Fairness: every scenario must consume the identical leader reference.
  const sim::TrajectoryLog& base = runs.front().log;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    const sim::TrajectoryLog& other = runs[r].log;
    bool same = other.n_ticks() == base.n_ticks();
    for (std::size_t k = 0; same && k < base.n_ticks(); ++k) {
      same = (other.reference(k, 0).array() == base.reference(k, 0).array()).all();
    }
    if (!same) {
      throw ConfigError("compare scenarios disagree on the leader reference path ('" +
                        variants.front().label + "' vs '" + variants[r].label + "')");
    }
  }

  std::vector<std::pair<std::string, analysis::PathMetrics>> rows;
  ordered_json report;
  report["seed"] = args.seed;
  report["scenarios"] = ordered_json::array();
  std::ostringstream header;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    rows.emplace_back(variants[r].label, analysis::followers_overall(runs[r].log));
    ordered_json entry;
    entry["label"] = variants[r].label;
    entry["config_hash"] = runs[r].hash;
    entry["leader"] = analysis::metrics_to_json(analysis::agent_metrics(runs[r].log, 0));
    entry["followers_overall"] = analysis::metrics_to_json(rows.back().second);
    report["scenarios"].push_back(std::move(entry));
    header << "# config_hash " << variants[r].label << "=" << runs[r].hash << "\n";
  }
  const std::string table = header.str() + analysis::render_table(rows);

  fs::create_directories(args.out_dir);
  write_file(fs::path(args.out_dir) / "compare.txt", table);
  write_file(fs::path(args.out_dir) / "compare.json", report.dump(2) + "\n");
  if (!args.quiet) {
    std::cout << table;
  }
  return 0;
}

int cmd_gait_trace(const CliArgs& args) {
  const ordered_json document = load_config_document(single_config_path(args));
  scenario::ScenarioConfig config;
  std::string hash;
  {
    ordered_json doc = document;
    for (const std::string& assignment : args.overrides) {
      scenario::apply_override(doc, assignment);
    }
    config = scenario::parse_config(doc);
    hash = scenario::config_hash(config, args.seed);
  }
  config.gait.validate(config.geometry);

  const gait::GaitPlan plan = config.gait.gait_type == gait::GaitType::type1
                                  ? gait::type1_plan(config.geometry, config.gait)
                                  : gait::type2_plan(config.geometry, config.gait);

  // Dense foot curve: for the sweeping gait this is the closed stance+swing
  // loop in the leg plane; for the shifting gait, the swing foot's path in
  // its own vertical plane (radial reach vs height).
  std::ostringstream foot;
  foot << "# config_hash=" << hash << "\n";
  foot << "phase,x_m,y_m\n";
  const int samples = 512;
  if (config.gait.gait_type == gait::GaitType::type1) {
    const gait::Type1Curve curve = gait::Type1Curve::build(config.geometry, config.gait);
    for (int i = 0; i <= samples; ++i) {
      const double phase = static_cast<double>(i) / samples;
      const kinematics::PlanarPoint p = curve.at(phase);
      foot << csv::format_double(phase) << ',' << csv::format_double(p.x) << ','
           << csv::format_double(p.y) << "\n";
    }
  } else {
    const double beta = config.gait.beta_init;
    const double l_p = config.geometry.upperarm * std::cos(beta);
    const double height = kinematics::robot_height(config.geometry, beta);
    // Recover the plan's stride geometry from its shift states.
    double alpha_max = 0.0;
    for (const gait::ShiftState& s : plan.shift_states) {
      alpha_max = std::max(alpha_max, s.alpha_sh);
    }
    const double d_max = l_p / std::cos(alpha_max);
    for (int i = 0; i <= samples; ++i) {
      const double s = static_cast<double>(i) / samples;
      const double reach = l_p + (d_max - l_p) * (s * s * (3.0 - 2.0 * s));
      const double z = -height + config.gait.swing_height * std::sin(kPi * s);
      foot << csv::format_double(s) << ',' << csv::format_double(reach) << ','
           << csv::format_double(z) << "\n";
    }
  }

  std::ostringstream schedule;
  gait::write_csv(schedule, plan, "config_hash=" + hash);

  fs::create_directories(args.out_dir);
  write_file(fs::path(args.out_dir) / "foot_trajectory.csv", foot.str());
  write_file(fs::path(args.out_dir) / "schedule.csv", schedule.str());
  if (!args.quiet) {
    std::cout << "wrote " << (fs::path(args.out_dir) / "foot_trajectory.csv").string() << " and "
              << (fs::path(args.out_dir) / "schedule.csv").string() << " (" << plan.ticks.size()
              << " ticks, config_hash " << hash << ")\n";
  }
  return 0;
}

int cmd_validate_config(const CliArgs& args) {
  ordered_json document = load_config_document(single_config_path(args));
  for (const std::string& assignment : args.overrides) {
    scenario::apply_override(document, assignment);
  }
  const scenario::ScenarioConfig config = scenario::parse_config(document);
  const std::string hash = scenario::config_hash(config, args.seed);
  if (!args.quiet) {
    std::cout << scenario::config_to_json(config).dump(2) << "\n";
  }
  std::cout << "config_hash " << hash << "\n";
  return 0;
}

int dispatch(const CliArgs& args) {
  if (args.help || args.verb.empty()) {
    std::cout << kUsage;
    return args.help ? 0 : 2;
  }
  if (args.verb == "run") {
    return cmd_run(args);
  }
  if (args.verb == "sweep") {
    return cmd_sweep(args);
  }
  if (args.verb == "compare") {
    return cmd_compare(args);
  }
  if (args.verb == "gait-trace") {
    return cmd_gait_trace(args);
  }
  if (args.verb == "validate-config") {
    return cmd_validate_config(args);
  }
  std::cerr << "unknown verb '" << args.verb << "'\n" << kUsage;
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(parse_args(argc, argv));
  } catch (const DivergenceError& error) {
    std::cerr << "divergence: " << error.what() << "\n";
    return 4;
  } catch (const InfeasibleError& error) {
    std::cerr << "infeasible: " << error.what() << "\n";
    return 3;
  } catch (const ConfigError& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
}
