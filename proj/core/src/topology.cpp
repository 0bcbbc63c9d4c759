#include "swarmgear/topology.hpp"

#include <queue>

#include "swarmgear/errors.hpp"

namespace swarmgear::topology {

TopologyKind parse_topology_kind(std::string_view name) {
  if (name == "star") return TopologyKind::star;
  if (name == "ring") return TopologyKind::ring;
  if (name == "tree") return TopologyKind::tree;
  throw ConfigError("topology: unknown kind '" + std::string(name) +
                    "' (expected star, ring, or tree)");
}

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::star: return "star";
    case TopologyKind::ring: return "ring";
    case TopologyKind::tree: return "tree";
  }
  return "star";
}

TopologyGraph build_topology(TopologyKind kind, int n_followers,
                             const std::vector<Eigen::Vector3d>& offsets) {
  if (n_followers < 1) {
    throw ConfigError("topology: need at least one follower");
  }
  if (offsets.size() != static_cast<std::size_t>(n_followers)) {
    throw ConfigError("topology: offsets length must equal the follower count");
  }

  // slot of agent id relative to the leader (leader slot is the origin)
  auto slot = [&](int id) {
    return id == 0 ? Eigen::Vector3d::Zero().eval() : offsets[static_cast<std::size_t>(id - 1)];
  };
  auto make_link = [&](int a, int b) {
    Link link;
    link.agent_a = a;
    link.agent_b = b;
    link.rest_offset = slot(b) - slot(a);
    link.leader_coupled = (a == 0 || b == 0);
    return link;
  };

  TopologyGraph graph;
  graph.n_agents = n_followers + 1;
  switch (kind) {
    case TopologyKind::star:
      for (int i = 1; i <= n_followers; ++i) graph.links.push_back(make_link(0, i));
      break;
    case TopologyKind::ring:
      for (int i = 0; i < n_followers; ++i) graph.links.push_back(make_link(i, i + 1));
      if (n_followers > 1) graph.links.push_back(make_link(n_followers, 0));
      break;
    case TopologyKind::tree:
      for (int i = 1; i <= n_followers; ++i) {
        graph.links.push_back(make_link(i == 1 ? 0 : i / 2, i));
      }
      break;
  }
  return graph;
}

bool is_connected(const TopologyGraph& graph) {
  if (graph.n_agents <= 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(graph.n_agents), 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  while (!frontier.empty()) {
    const int id = frontier.front();
    frontier.pop();
    for (const Link& link : graph.links) {
      const int other = link.agent_a == id ? link.agent_b : (link.agent_b == id ? link.agent_a : -1);
      if (other >= 0 && !seen[static_cast<std::size_t>(other)]) {
        seen[static_cast<std::size_t>(other)] = 1;
        frontier.push(other);
      }
    }
  }
  for (const char s : seen) {
    if (!s) return false;
  }
  return true;
}

}  // namespace swarmgear::topology
