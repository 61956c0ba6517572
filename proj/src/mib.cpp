#include "mcast/mib.hpp"

#include <algorithm>

namespace mcast {

namespace {

std::vector<NodeId> subtree_nodes(
    const std::map<NodeId, std::vector<NodeId>>& ch, NodeId root) {
  std::vector<NodeId> out{root};
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    auto it = ch.find(u);
    if (it == ch.end()) continue;
    for (NodeId c : it->second) {
      out.push_back(c);
      stack.push_back(c);
    }
  }
  return out;
}

}  // namespace

Rational branch_depth(const NetworkGraph& g, const RootedTree& t, NodeId mib,
                      NodeId child) {
  auto it = t.parent.find(child);
  if (it == t.parent.end() || it->second != mib)
    throw InvariantError("branch_depth: " + std::to_string(child) +
                         " is not a child of " + std::to_string(mib));
  auto ch = t.children();
  Rational best = g.edge_cost(mib, child);
  std::vector<std::pair<NodeId, Rational>> stack{{child, best}};
  while (!stack.empty()) {
    auto [u, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    auto cit = ch.find(u);
    if (cit == ch.end()) continue;
    for (NodeId w : cit->second) stack.push_back({w, d + g.edge_cost(u, w)});
  }
  return best;
}

CutResult process_mib_nodes(const RootedTree& pruned, const NetworkGraph& g,
                            NodeId source, const std::set<NodeId>& dests,
                            MibMode mode) {
  if (pruned.root != source)
    throw InvariantError("process_mib_nodes: tree not rooted at source");
  CutResult res;
  RootedTree tp = pruned;

  std::map<NodeId, std::set<NodeId>> sep;
  if (mode == MibMode::kMibPro)
    sep = articulation_analysis(g, source, dests).separators;

  while (true) {
    auto ch = tp.children();
    // First MIB node in BFS order; rescan after every cut so branches deleted
    // under an upper MIB remove lower MIB nodes before they are reached.
    NodeId mib = 0;
    bool found = false;
    for (NodeId u : tp.bfs_order()) {
      auto it = ch.find(u);
      if (it != ch.end() && it->second.size() >= 2 && !g.is_mc(u)) {
        mib = u;
        found = true;
        break;
      }
    }
    if (!found) break;

    const std::vector<NodeId>& kids = ch.at(mib);  // ascending
    std::vector<NodeId> drop;
    MibDecision dec;
    dec.mib = mib;
    if (mode == MibMode::kMibPro2) {
      drop = kids;
      dec.kept_branch = 0;
      dec.rule = MibRuleFired::kDeleteAll;
    } else {
      NodeId keep = 0;
      if (mode == MibMode::kLowestId) {
        keep = kids.front();
        dec.rule = MibRuleFired::kLowestId;
      } else {
        // A branch holds a CC destination iff some destination u inside it
        // has this MIB node among its separators w.r.t. the source.
        std::vector<NodeId> cc_kids;
        for (NodeId c : kids) {
          bool holds = false;
          for (NodeId u : subtree_nodes(ch, c)) {
            if (dests.count(u) && sep.at(u).count(mib)) {
              holds = true;
              break;
            }
          }
          if (holds) cc_kids.push_back(c);
        }
        if (cc_kids.size() == 1) {
          keep = cc_kids.front();
          dec.rule = MibRuleFired::kOneCc;
        } else {
          const std::vector<NodeId>& pool =
              cc_kids.empty() ? kids : cc_kids;
          dec.rule = cc_kids.empty() ? MibRuleFired::kNoCcDeepest
                                     : MibRuleFired::kMultiCcDeepest;
          keep = pool.front();
          Rational best = branch_depth(g, tp, mib, keep);
          for (std::size_t i = 1; i < pool.size(); ++i) {
            Rational d = branch_depth(g, tp, mib, pool[i]);
            if (d > best) {  // ties keep the earlier (smaller) child id
              best = d;
              keep = pool[i];
            }
          }
        }
      }
      dec.kept_branch = keep;
      for (NodeId c : kids)
        if (c != keep) drop.push_back(c);
    }
    for (NodeId c : drop) {
      for (NodeId v : subtree_nodes(ch, c)) {
        if (dests.count(v)) res.cut_destinations.insert(v);
        tp.parent.erase(v);
      }
    }
    res.decisions.push_back(dec);
  }

  // Re-prune so every leaf of the survivor is a destination it still serves.
  std::set<NodeId> served;
  std::set<NodeId> nodes = tp.nodes();
  for (NodeId d : dests) {
    if (nodes.count(d)) served.insert(d);
  }
  res.subtree = prune_spt(tp, served);
  return res;
}

}  // namespace mcast
