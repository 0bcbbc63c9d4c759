#include "swarmgear/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "swarmgear/errors.hpp"
#include "swarmgear/units.hpp"

namespace swarmgear::analysis {

namespace {

void require_agent(const sim::TrajectoryLog& log, int agent) {
  if (log.n_ticks() == 0) {
    throw ConfigError("trajectory log is empty");
  }
  if (agent < 0 || agent >= log.n_agents) {
    throw ConfigError("agent id " + std::to_string(agent) + " out of range (log has " +
                      std::to_string(log.n_agents) + " agents)");
  }
}

/// Accumulates every per-tick statistic for a set of agents in one pass so
/// pooled (followers-overall) rows are exactly the weighted combination of
/// the individual rows.
struct Accumulator {
  double sum_abs_x = 0.0;
  double sum_abs_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;
  double sum_sq = 0.0;
  double max_norm = 0.0;
  std::size_t n = 0;

  void add(const Eigen::Vector3d& actual, const Eigen::Vector3d& reference) {
    const Eigen::Vector3d err = actual - reference;
    sum_abs_x += std::abs(err.x());
    sum_abs_y += std::abs(err.y());
    max_x = std::max(max_x, std::abs(err.x()));
    max_y = std::max(max_y, std::abs(err.y()));
    sum_sq += err.squaredNorm();
    max_norm = std::max(max_norm, err.norm());
    ++n;
  }
};

std::optional<Segment> reference_segment(const sim::TrajectoryLog& log, int agent) {
  const Eigen::Vector3d& first = log.reference(0, agent);
  const Eigen::Vector3d& last = log.reference(log.n_ticks() - 1, agent);
  Segment segment{first.head<2>(), last.head<2>()};
  if ((segment.end - segment.start).norm() < 1e-9) {
    return std::nullopt;
  }
  return segment;
}

std::string format_cell(const std::optional<double>& value) {
  if (!value) {
    return "-";
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4f", *value);
  return buffer;
}

}  // namespace

AxisErrorStats per_axis_error(const sim::TrajectoryLog& log, int agent) {
  require_agent(log, agent);
  Accumulator acc;
  for (std::size_t k = 0; k < log.n_ticks(); ++k) {
    acc.add(log.sample(k, agent).position, log.reference(k, agent));
  }
  return {acc.sum_abs_x / static_cast<double>(acc.n), acc.sum_abs_y / static_cast<double>(acc.n),
          acc.max_x, acc.max_y};
}

std::pair<double, double> rmse_and_max(const sim::TrajectoryLog& log, int agent) {
  require_agent(log, agent);
  Accumulator acc;
  for (std::size_t k = 0; k < log.n_ticks(); ++k) {
    acc.add(log.sample(k, agent).position, log.reference(k, agent));
  }
  return {std::sqrt(acc.sum_sq / static_cast<double>(acc.n)), acc.max_norm};
}

std::pair<double, double> crosstrack(const sim::TrajectoryLog& log, int agent,
                                     const Segment& line) {
  require_agent(log, agent);
  const Eigen::Vector2d direction = line.end - line.start;
  const double length = direction.norm();
  if (length < 1e-12) {
    throw ConfigError("crosstrack reference segment is degenerate (zero length)");
  }
  const Eigen::Vector2d unit = direction / length;
  double sum = 0.0;
  double max = 0.0;
  for (std::size_t k = 0; k < log.n_ticks(); ++k) {
    const Eigen::Vector2d p = log.sample(k, agent).position.head<2>();
    const Eigen::Vector2d rel = p - line.start;
    const double distance = std::abs(unit.x() * rel.y() - unit.y() * rel.x());
    sum += distance;
    max = std::max(max, distance);
  }
  return {sum / static_cast<double>(log.n_ticks()), max};
}

std::pair<double, double> velocity_stats(const sim::TrajectoryLog& log, int agent) {
  require_agent(log, agent);
  if (log.n_ticks() < 2) {
    throw ConfigError("velocity stats need at least two samples");
  }
  double sum = 0.0;
  double max = 0.0;
  for (std::size_t k = 1; k < log.n_ticks(); ++k) {
    const Eigen::Vector2d delta = log.sample(k, agent).position.head<2>() -
                                  log.sample(k - 1, agent).position.head<2>();
    const double speed = delta.norm() / log.dt;
    sum += speed;
    max = std::max(max, speed);
  }
  return {sum / static_cast<double>(log.n_ticks() - 1), max};
}

double yaw_std_deg(const sim::TrajectoryLog& log) {
  if (log.leader_yaw.empty()) {
    throw ConfigError("trajectory log has no leader heading samples");
  }
  double mean = 0.0;
  for (const double yaw : log.leader_yaw) {
    mean += yaw;
  }
  mean /= static_cast<double>(log.leader_yaw.size());
  double variance = 0.0;
  for (const double yaw : log.leader_yaw) {
    variance += (yaw - mean) * (yaw - mean);
  }
  variance /= static_cast<double>(log.leader_yaw.size());
  return rad_to_deg(std::sqrt(variance));
}

PathMetrics agent_metrics(const sim::TrajectoryLog& log, int agent) {
  require_agent(log, agent);
  PathMetrics metrics;
  const AxisErrorStats axis = per_axis_error(log, agent);
  metrics.mean_err_x = axis.mean_x;
  metrics.mean_err_y = axis.mean_y;
  metrics.max_err_x = axis.max_x;
  metrics.max_err_y = axis.max_y;
  std::tie(metrics.rmse, metrics.max_err) = rmse_and_max(log, agent);
  if (const std::optional<Segment> segment = reference_segment(log, agent)) {
    std::tie(metrics.crosstrack_mean, metrics.crosstrack_max) =
        [&] {
          const auto [mean, max] = crosstrack(log, agent, *segment);
          return std::pair<std::optional<double>, std::optional<double>>(mean, max);
        }();
  }
  if (log.n_ticks() >= 2) {
    std::tie(metrics.mean_speed, metrics.max_speed) = velocity_stats(log, agent);
  }
  if (agent == 0 && !log.leader_yaw.empty()) {
    metrics.yaw_std = yaw_std_deg(log);
  }
  metrics.n_samples = log.n_ticks();
  return metrics;
}

PathMetrics followers_overall(const sim::TrajectoryLog& log) {
  if (log.n_ticks() == 0) {
    throw ConfigError("trajectory log is empty");
  }
  if (log.n_agents < 2) {
    throw ConfigError("trajectory log has no followers");
  }
  PathMetrics pooled;
  Accumulator acc;
  double speed_sum = 0.0;
  double speed_max = 0.0;
  std::size_t speed_n = 0;
  double cross_sum = 0.0;
  double cross_max = 0.0;
  std::size_t cross_n = 0;
  bool cross_ok = true;
  for (int agent = 1; agent < log.n_agents; ++agent) {
    for (std::size_t k = 0; k < log.n_ticks(); ++k) {
      acc.add(log.sample(k, agent).position, log.reference(k, agent));
    }
    if (log.n_ticks() >= 2) {
      const auto [mean, max] = velocity_stats(log, agent);
      speed_sum += mean * static_cast<double>(log.n_ticks() - 1);
      speed_max = std::max(speed_max, max);
      speed_n += log.n_ticks() - 1;
    }
    if (const std::optional<Segment> segment = reference_segment(log, agent)) {
      const auto [mean, max] = crosstrack(log, agent, *segment);
      cross_sum += mean * static_cast<double>(log.n_ticks());
      cross_max = std::max(cross_max, max);
      cross_n += log.n_ticks();
    } else {
      cross_ok = false;
    }
  }
  pooled.mean_err_x = acc.sum_abs_x / static_cast<double>(acc.n);
  pooled.mean_err_y = acc.sum_abs_y / static_cast<double>(acc.n);
  pooled.max_err_x = acc.max_x;
  pooled.max_err_y = acc.max_y;
  pooled.rmse = std::sqrt(acc.sum_sq / static_cast<double>(acc.n));
  pooled.max_err = acc.max_norm;
  if (cross_ok && cross_n > 0) {
    pooled.crosstrack_mean = cross_sum / static_cast<double>(cross_n);
    pooled.crosstrack_max = cross_max;
  }
  if (speed_n > 0) {
    pooled.mean_speed = speed_sum / static_cast<double>(speed_n);
    pooled.max_speed = speed_max;
  }
  pooled.n_samples = acc.n;
  return pooled;
}

nlohmann::ordered_json metrics_to_json(const PathMetrics& metrics) {
  nlohmann::ordered_json j;
  j["mean_err_x"] = metrics.mean_err_x;
  j["mean_err_y"] = metrics.mean_err_y;
  j["max_err_x"] = metrics.max_err_x;
  j["max_err_y"] = metrics.max_err_y;
  j["rmse"] = metrics.rmse;
  j["max_err"] = metrics.max_err;
  j["crosstrack_mean"] = metrics.crosstrack_mean
                             ? nlohmann::ordered_json(*metrics.crosstrack_mean)
                             : nlohmann::ordered_json(nullptr);
  j["crosstrack_max"] = metrics.crosstrack_max ? nlohmann::ordered_json(*metrics.crosstrack_max)
                                               : nlohmann::ordered_json(nullptr);
  j["mean_speed"] = metrics.mean_speed;
  j["max_speed"] = metrics.max_speed;
  j["yaw_std_deg"] =
      metrics.yaw_std ? nlohmann::ordered_json(*metrics.yaw_std) : nlohmann::ordered_json(nullptr);
  j["n_samples"] = metrics.n_samples;
  return j;
}

nlohmann::ordered_json log_metrics_json(const sim::TrajectoryLog& log) {
  nlohmann::ordered_json agents = nlohmann::ordered_json::array();
  for (int agent = 0; agent < log.n_agents; ++agent) {
    nlohmann::ordered_json entry;
    entry["agent_id"] = agent;
    entry["role"] = agent == 0 ? "leader" : "follower";
    entry["metrics"] = metrics_to_json(agent_metrics(log, agent));
    agents.push_back(std::move(entry));
  }
  nlohmann::ordered_json j;
  j["agents"] = std::move(agents);
  if (log.n_agents >= 2) {
    j["followers_overall"] = metrics_to_json(followers_overall(log));
  }
  return j;
}

std::string render_table(const std::vector<std::pair<std::string, PathMetrics>>& rows) {
  const std::vector<std::string> headers = {"scenario",   "mean_ex", "mean_ey", "max_ex",
                                            "max_ey",     "rmse",    "max_err", "xtrack_mean",
                                            "xtrack_max", "v_mean",  "v_max",   "yaw_std"};
  std::vector<std::vector<std::string>> cells;
  cells.push_back(headers);
  for (const auto& [label, m] : rows) {
    cells.push_back({label, format_cell(m.mean_err_x), format_cell(m.mean_err_y),
                     format_cell(m.max_err_x), format_cell(m.max_err_y), format_cell(m.rmse),
                     format_cell(m.max_err), format_cell(m.crosstrack_mean),
                     format_cell(m.crosstrack_max), format_cell(m.mean_speed),
                     format_cell(m.max_speed), format_cell(m.yaw_std)});
  }
  std::vector<std::size_t> widths(headers.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      if (c > 0) {
        out << "  ";
      }
      // Left-align the label column, right-align the numbers.
      const std::string& text = cells[r][c];
      if (c == 0) {
        out << text << std::string(widths[c] - text.size(), ' ');
      } else {
        out << std::string(widths[c] - text.size(), ' ') << text;
      }
    }
    out << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < widths.size(); ++c) {
        total += widths[c] + (c > 0 ? 2 : 0);
      }
      out << std::string(total, '-') << '\n';
    }
  }
  return out.str();
}

}  // namespace swarmgear::analysis
