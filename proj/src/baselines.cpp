#include "mcast/baselines.hpp"

namespace mcast {

std::string to_string(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::kMibPro:
      return "MIBPro";
    case AlgorithmId::kMibPro2:
      return "MIBPro2";
    case AlgorithmId::kR2S:
      return "R2S";
    case AlgorithmId::kR2A:
      return "R2A";
    case AlgorithmId::kMO:
      return "MO";
  }
  throw InvariantError("to_string: unknown algorithm id");
}

std::optional<AlgorithmId> parse_algorithm(const std::string& name) {
  for (AlgorithmId id : kAllAlgorithms) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

namespace {

void require_session(const NetworkGraph& g, const MulticastSession& ms) {
  if (!g.has_node(ms.source)) throw InvariantError("session: bad source");
  if (ms.dests.empty()) throw InvariantError("session: no destinations");
  if (ms.dests.count(ms.source))
    throw InvariantError("session: source among destinations");
  for (NodeId d : ms.dests) {
    if (!g.has_node(d)) throw InvariantError("session: bad destination");
  }
}

std::set<NodeId> served_by(const RootedTree& t, const std::set<NodeId>& dests) {
  std::set<NodeId> served;
  for (NodeId v : t.nodes()) {
    if (dests.count(v)) served.insert(v);
  }
  return served;
}

LightForest cut_and_reconnect(const NetworkGraph& g,
                              const MulticastSession& ms,
                              const RootedTree& pruned, MibMode mode,
                              ReconnectTies ties) {
  CutResult cut = process_mib_nodes(pruned, g, ms.source, ms.dests, mode);
  LightTree seed{cut.subtree, served_by(cut.subtree, ms.dests)};
  return reconnect(g, ms.source, std::move(seed), cut.cut_destinations, ties);
}

}  // namespace

LightForest mibpro(const NetworkGraph& g, const MulticastSession& ms) {
  require_session(g, ms);
  SptTree spt = dijkstra_pro_spt(g, ms.source, ms.dests);
  RootedTree pruned = prune_spt(spt.tree, ms.dests);
  return cut_and_reconnect(g, ms, pruned, MibMode::kMibPro,
                           ReconnectTies::kDistance);
}

LightForest mibpro2(const NetworkGraph& g, const MulticastSession& ms) {
  require_session(g, ms);
  SptTree spt = dijkstra_pro_spt(g, ms.source, ms.dests);
  RootedTree pruned = prune_spt(spt.tree, ms.dests);
  return cut_and_reconnect(g, ms, pruned, MibMode::kMibPro2,
                           ReconnectTies::kDistance);
}

LightForest reroute_to_source(const NetworkGraph& g,
                              const MulticastSession& ms) {
  require_session(g, ms);
  SptTree spt = dijkstra_spt(g, ms.source);
  RootedTree pruned = prune_spt(spt.tree, ms.dests);
  LightForest f;
  f.session = ms;
  std::set<NodeId> served_any;
  for (RootedTree& part : split_at_mib_nodes(g, pruned)) {
    // A destination reached by several path copies counts for the tree
    // emitted first.
    std::set<NodeId> served;
    for (NodeId v : part.nodes()) {
      if (ms.dests.count(v) && served_any.insert(v).second) served.insert(v);
    }
    f.trees.push_back({std::move(part), std::move(served)});
  }
  return f;
}

LightForest reroute_to_any(const NetworkGraph& g, const MulticastSession& ms) {
  require_session(g, ms);
  SptTree spt = dijkstra_spt(g, ms.source);
  RootedTree pruned = prune_spt(spt.tree, ms.dests);
  return cut_and_reconnect(g, ms, pruned, MibMode::kLowestId,
                           ReconnectTies::kPlain);
}

LightForest member_only(const NetworkGraph& g, const MulticastSession& ms) {
  require_session(g, ms);
  return reconnect(g, ms.source, std::nullopt, ms.dests,
                   ReconnectTies::kPlain);
}

LightForest run_algorithm(AlgorithmId id, const NetworkGraph& g,
                          const MulticastSession& ms) {
  switch (id) {
    case AlgorithmId::kMibPro:
      return mibpro(g, ms);
    case AlgorithmId::kMibPro2:
      return mibpro2(g, ms);
    case AlgorithmId::kR2S:
      return reroute_to_source(g, ms);
    case AlgorithmId::kR2A:
      return reroute_to_any(g, ms);
    case AlgorithmId::kMO:
      return member_only(g, ms);
  }
  throw InvariantError("run_algorithm: unknown algorithm id");
}

}  // namespace mcast
