#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "swarmgear/simulation.hpp"

namespace swarmgear::analysis {

/// Mean/max of |actual - reference| per horizontal axis.
struct AxisErrorStats {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;
};

AxisErrorStats per_axis_error(const sim::TrajectoryLog& log, int agent);

/// Root-mean-square and maximum of the Euclidean error against the
/// reference column.
std::pair<double, double> rmse_and_max(const sim::TrajectoryLog& log, int agent);

/// A straight reference segment in the horizontal plane.
struct Segment {
  Eigen::Vector2d start{0.0, 0.0};
  Eigen::Vector2d end{0.0, 0.0};
};

/// Mean/max perpendicular distance from the agent's samples to the
/// segment's supporting line (XY only). Throws on a degenerate segment.
std::pair<double, double> crosstrack(const sim::TrajectoryLog& log, int agent,
                                     const Segment& line);

/// Mean/max planar speed from finite differences of logged positions.
/// Throws if the log has fewer than two ticks.
std::pair<double, double> velocity_stats(const sim::TrajectoryLog& log, int agent);

/// Standard deviation of the leader's logged heading, degrees. Zero for an
/// ideal (undisturbed) walk or a straight scripted path.
double yaw_std_deg(const sim::TrajectoryLog& log);

/// One row of the comparison tables. Crosstrack is present only when the
/// agent's reference forms a usable straight segment; yaw_std only for the
/// leader.
struct PathMetrics {
  double mean_err_x = 0.0;
  double mean_err_y = 0.0;
  double max_err_x = 0.0;
  double max_err_y = 0.0;
  double rmse = 0.0;
  double max_err = 0.0;
  std::optional<double> crosstrack_mean;
  std::optional<double> crosstrack_max;
  double mean_speed = 0.0;
  double max_speed = 0.0;
  std::optional<double> yaw_std;  // degrees
  std::size_t n_samples = 0;
};

PathMetrics agent_metrics(const sim::TrajectoryLog& log, int agent);

/// Pools every follower sample into one row; its RMSE equals the
/// sample-count-weighted RMS combination of the per-follower RMSEs.
PathMetrics followers_overall(const sim::TrajectoryLog& log);

nlohmann::ordered_json metrics_to_json(const PathMetrics& metrics);

/// Per-agent rows plus the pooled follower row for one log.
nlohmann::ordered_json log_metrics_json(const sim::TrajectoryLog& log);

/// Fixed-precision aligned text table, one row per labeled entry.
std::string render_table(const std::vector<std::pair<std::string, PathMetrics>>& rows);

}  // namespace swarmgear::analysis
