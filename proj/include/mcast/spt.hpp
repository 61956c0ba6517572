#pragma once

#include <map>
#include <set>
#include <vector>

#include "mcast/graph.hpp"

namespace mcast {

// A rooted tree stored as child -> parent links. The root has no entry.
// Shared by the SPT builders, the MIB processor and the light-tree layer.
struct RootedTree {
  NodeId root = 0;
  std::map<NodeId, NodeId> parent;

  bool contains(NodeId v) const { return v == root || parent.count(v) > 0; }
  std::set<NodeId> nodes() const;
  // children[v] in ascending order; nodes without children are absent.
  std::map<NodeId, std::vector<NodeId>> children() const;
  // Nodes in BFS order from the root, children visited in ascending id order.
  std::vector<NodeId> bfs_order() const;
  // root..v (inclusive); throws InvariantError if v is not in the tree.
  std::vector<NodeId> path_from_root(NodeId v) const;
  // Additive edge length from the root to every node.
  std::map<NodeId, Rational> depths(const NetworkGraph& g, Metric metric) const;
};

struct SptTree {
  RootedTree tree;
  std::map<NodeId, Rational> dist;  // true shortest-path distance (cost metric)
};

// Classic Dijkstra SPT. Deterministic "arbitrary" tie-breaks: smallest-id pop
// among equal-distance tentative nodes, smallest-id parent on equal-distance
// relaxation ties.
SptTree dijkstra_spt(const NetworkGraph& g, NodeId source);

struct DijkstraProOptions {
  bool mc_priority = true;      // MC candidate nodes labeled first in a level
  bool degree_priority = true;  // then MI candidates by ascending graph degree
  bool adoption = true;         // within-level node adoption pass
};

// Level-by-level Dijkstra variant. A "level" is the maximal set of tentative
// nodes sharing the current minimum distance. Within a level the labeling
// order is (1) MC nodes, (2) MI nodes by ascending graph degree, (3) ascending
// id; relaxation keeps the first claimant on equal-distance ties. After a
// level is fully labeled, node adoption runs inside it: donors are MI level
// members with >= 2 tentative children; adopters are level members with no
// children at the start of the pass (one child max for an MI adopter,
// unlimited for MC); a donor's children are offered destinations-first, then
// ascending id, and a child c may move to adopter y only when y is adjacent to
// c and dist[y] + cost(y,c) == dist[c]. Produces the same dist map as
// dijkstra_spt -- only the tree shape differs.
SptTree dijkstra_pro_spt(const NetworkGraph& g, NodeId source,
                         const std::set<NodeId>& dests,
                         const DijkstraProOptions& opts = {});

// Smallest subtree containing the root and all destinations.
RootedTree prune_spt(const RootedTree& t, const std::set<NodeId>& dests);

// MI nodes (the root included) with out-degree >= 2 in the tree.
std::set<NodeId> mib_census(const NetworkGraph& g, const RootedTree& t);

// Splits a tree into MI-legal trees: at the first MIB node in BFS order the
// lowest-id child branch is kept and every other child subtree is re-spawned
// as shortest-path-tree path(root -> MIB) + subtree, recursively. The result
// is the Reroute-to-Source decomposition; every returned tree satisfies MI
// out-degree <= 1 and every root->node path is an original tree path.
std::vector<RootedTree> split_at_mib_nodes(const NetworkGraph& g,
                                           const RootedTree& t);

// Diagnostic stress of a (pruned) SPT: max per-edge multiplicity over the
// split_at_mib_nodes decomposition -- the per-fiber wavelength count needed to
// realize the SPT as light-trees.
int spt_link_stress(const NetworkGraph& g, const RootedTree& t);

}  // namespace mcast
