#pragma once

#include <set>
#include <vector>

#include "mcast/spt.hpp"

namespace mcast {

enum class MibMode {
  kMibPro,    // articulation + deepest-branch heuristics, keep one branch
  kMibPro2,   // delete every downstream branch of each MIB node
  kLowestId,  // keep the lowest-id branch (the R2A stand-in rule)
};

enum class MibRuleFired {
  kNoCcDeepest,     // no branch holds a CC destination -> deepest branch
  kOneCc,           // exactly one branch holds a CC destination -> that branch
  kMultiCcDeepest,  // several do -> deepest among them
  kLowestId,
  kDeleteAll,
};

struct MibDecision {
  NodeId mib = 0;
  NodeId kept_branch = 0;  // child id; 0 for kDeleteAll
  MibRuleFired rule = MibRuleFired::kNoCcDeepest;
};

struct CutResult {
  RootedTree subtree;                // MIB-free, re-pruned (leaves are dests)
  std::set<NodeId> cut_destinations;
  std::vector<MibDecision> decisions;
};

// Max additive cost from `mib` to any node of the branch rooted at `child`.
Rational branch_depth(const NetworkGraph& g, const RootedTree& t, NodeId mib,
                      NodeId child);

// Processes MIB nodes of a pruned SPT top-down (BFS order, rescanning after
// each cut, so branches deleted under an upper MIB remove lower MIB nodes
// before they are reached). A branch "holds a CC destination" iff some
// destination u inside it has the MIB node in separators[u] w.r.t. the source.
// Kept-branch ties go to the smaller child id. Destinations inside deleted
// branches join cut_destinations; finally the survivor is re-pruned so every
// leaf is a destination.
CutResult process_mib_nodes(const RootedTree& pruned, const NetworkGraph& g,
                            NodeId source, const std::set<NodeId>& dests,
                            MibMode mode);

}  // namespace mcast
