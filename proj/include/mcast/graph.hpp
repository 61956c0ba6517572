#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mcast/rational.hpp"

namespace mcast {

using NodeId = int;  // 1-based, as in the topology files

// Raised when an internal invariant is violated (CLI maps it to exit code 3).
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

// Raised on malformed or invalid topology input (CLI exit code 2).
struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EdgeRecord {
  NodeId u = 0;
  NodeId v = 0;
  Rational cost{1};
  Rational delay{1};
};

enum class Metric { kCost, kDelay };

// Undirected, connected, simple graph with a per-node splitting flag.
// Immutable after construction; cheap to copy (the experiments swap MC sets
// per session via with_mc()).
class NetworkGraph {
 public:
  NetworkGraph(int node_count, std::vector<EdgeRecord> edges,
               std::set<NodeId> mc_nodes = {});

  // Topology file format: `nodes <N>`, optional `mc <id>...`, one
  // `edge <u> <v> [cost] [delay]` per line, `#` comments. Throws TopologyError
  // with a line number on any syntax or validity problem.
  static NetworkGraph parse_topology(const std::string& text);
  static NetworkGraph load_file(const std::string& path);

  std::string serialize() const;

  int node_count() const { return node_count_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  // Neighbors in ascending id order.
  const std::vector<NodeId>& neighbors(NodeId v) const;
  int degree(NodeId v) const;
  bool has_node(NodeId v) const { return v >= 1 && v <= node_count_; }
  bool has_edge(NodeId u, NodeId v) const;
  const Rational& edge_cost(NodeId u, NodeId v) const;
  const Rational& edge_delay(NodeId u, NodeId v) const;

  bool is_mc(NodeId v) const { return mc_nodes_.count(v) > 0; }
  const std::set<NodeId>& mc_nodes() const { return mc_nodes_; }
  // Same adjacency, different splitter placement.
  NetworkGraph with_mc(std::set<NodeId> mc_nodes) const;

 private:
  void require_node(NodeId v, const char* what) const;

  int node_count_ = 0;
  std::vector<EdgeRecord> edges_;
  std::vector<std::vector<NodeId>> adj_;          // [0] unused
  std::map<std::pair<NodeId, NodeId>, int> edge_index_;  // key (min,max)
  std::set<NodeId> mc_nodes_;
};

// Single-source shortest distances/parents under `metric`, over the graph with
// `blocked` nodes removed (the source itself must not be blocked). Ties are
// deterministic: among equal-distance tentative nodes the smallest id is
// settled first, and on equal-distance relaxation the smaller-id parent wins.
// dist entries for unreachable nodes are absent.
struct ShortestPathMap {
  NodeId source = 0;
  std::map<NodeId, Rational> dist;
  std::map<NodeId, NodeId> parent;  // absent for source / unreachable

  bool reached(NodeId v) const { return dist.count(v) > 0; }
  // Path source..v (inclusive); throws InvariantError if v unreachable.
  std::vector<NodeId> walk(NodeId v) const;
};

ShortestPathMap shortest_path_map(const NetworkGraph& g, NodeId source,
                                  Metric metric = Metric::kCost,
                                  const std::set<NodeId>& blocked = {});

struct PathResult {
  std::vector<NodeId> path;  // u..v inclusive
  Rational length;
};

// Minimal-length u->v path under `metric`; among minimal paths returns the
// lexicographically smallest node sequence.
PathResult shortest_path(const NetworkGraph& g, NodeId u, NodeId v,
                         Metric metric = Metric::kCost);

struct ArticulationReport {
  NodeId source = 0;
  // separators[u] = nodes x (x != u, x != source) whose removal disconnects u
  // from the source. u is a CC node iff its set is non-empty.
  std::map<NodeId, std::set<NodeId>> separators;
};

ArticulationReport articulation_analysis(const NetworkGraph& g, NodeId source,
                                         const std::set<NodeId>& targets);

// Degree facts for the two shipped reference topologies (no-op for other node
// counts); called by the CLI commands (not by parse) so that arbitrary
// research graphs remain usable through the library API. Throws TopologyError.
void check_reference_degree_profile(const NetworkGraph& g);

}  // namespace mcast
