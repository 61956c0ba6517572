#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcast/spt.hpp"

namespace mcast {

struct MulticastSession {
  NodeId source = 0;
  std::set<NodeId> dests;  // never contains source, never empty
};

// One light-tree = one wavelength. `served` is the subset of session
// destinations this tree exclusively serves.
struct LightTree {
  RootedTree tree;
  std::set<NodeId> served;
};

struct LightForest {
  MulticastSession session;
  std::vector<LightTree> trees;

  int stress() const { return static_cast<int>(trees.size()); }
};

// Connector bookkeeping for one tree under construction: every tree node is
// either a connector (MC, or an MI leaf) or blocked (MI with a child).
struct ReconnectionState {
  RootedTree tree;
  std::set<NodeId> mc_set;  // connectors
  std::set<NodeId> mi_set;  // blocked
  std::set<NodeId> remaining;

  static ReconnectionState from_tree(const NetworkGraph& g, RootedTree t,
                                     std::set<NodeId> remaining);
};

struct ScpResult {
  Rational length{0};
  NodeId connector = 0;
  std::vector<NodeId> path;  // connector..u (inclusive)
  // every other minimal-length connector, for tie-breaking
  std::vector<NodeId> tied_connectors;
};

// Shortest Constraint Path: minimal cost path from u (outside the tree) to any
// connector, avoiding mi_set entirely. nullopt when every connector is
// unreachable in g minus mi_set. The returned path is the deterministic
// smallest-id-parent Dijkstra path for the chosen connector; tied_connectors
// lists all equally near connectors in ascending id order.
std::optional<ScpResult> scp(NodeId u, const ReconnectionState& state,
                             const NetworkGraph& g);

enum class ReconnectTies {
  // Distance-based: equal SCP -> destination nearest to the source in G (cost
  // metric), then smallest id; equal connectors -> nearest to the source along
  // the tree (delay metric), then smallest id.
  kDistance,
  // Plain greedy: smallest destination id, then smallest connector id.
  kPlain,
};

// Iteratively attaches the remaining destination with minimal SCP to the tree
// seeded from `seed` (or {source} when absent); starts a fresh tree at
// {source} whenever no remaining destination has an SCP. Destinations that an
// attach path passes through are served by the same tree. The session is
// source + (destinations served by seed) + remaining.
LightForest reconnect(const NetworkGraph& g, NodeId source,
                      std::optional<LightTree> seed, std::set<NodeId> remaining,
                      ReconnectTies ties);

struct MetricsReport {
  int stress = 0;             // number of light-trees/wavelengths
  Rational total_cost{0};     // sum of edge costs over all trees
  Rational aver_delay{0};     // mean end-to-end delay over destinations
  Rational max_delay{0};      // worst end-to-end delay over destinations
};

MetricsReport metrics(const LightForest& f, const NetworkGraph& g);

// Diagnostic only (the headline stress is the tree count): max over edges of the
// number of trees using that edge.
int link_stress_per_fiber(const LightForest& f);

// One line per tree: `tree <i>: edge <u>-<v> ...; serves <d,...>`.
std::string serialize_forest(const LightForest& f);

// Checks every LightTree/LightForest invariant (rooted connected acyclic
// trees over real edges, MI out-degree <= 1, served sets partition D).
// Throws InvariantError on the first violation.
void validate_forest(const LightForest& f, const NetworkGraph& g);

}  // namespace mcast
