#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace swarmgear::topology {

enum class TopologyKind { star, ring, tree };

TopologyKind parse_topology_kind(std::string_view name);
std::string to_string(TopologyKind kind);

/// One virtual link between two agents. rest_offset is the nominal
/// displacement from agent_a's slot to agent_b's slot; leader_coupled links
/// carry the leader-velocity force, follower-follower links act as
/// spring-dampers about rest_offset.
struct Link {
  int agent_a = 0;
  int agent_b = 0;
  Eigen::Vector3d rest_offset = Eigen::Vector3d::Zero();
  bool leader_coupled = false;
};

/// Agent 0 is the leader; followers are 1..n_agents-1.
struct TopologyGraph {
  int n_agents = 0;
  std::vector<Link> links;

  int followers() const { return n_agents - 1; }
};

/// Builds the three evaluated layouts from the follower formation offsets
/// (slot of follower i relative to the leader, 1-based i maps to offsets[i-1]):
///   star: every follower linked to the leader (N links);
///   ring: one cycle leader-f1-...-fN-leader (N+1 links; N=1 degenerates
///         to a single leader link);
///   tree: leader root, follower i >= 2 attached to follower i/2 (N links).
/// Throws ConfigError for n_followers < 1 or offset-count mismatch.
TopologyGraph build_topology(TopologyKind kind, int n_followers,
                             const std::vector<Eigen::Vector3d>& offsets);

/// True when every agent is reachable from the leader over the links.
bool is_connected(const TopologyGraph& graph);

}  // namespace swarmgear::topology
