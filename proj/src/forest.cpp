#include "mcast/forest.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mcast {

ReconnectionState ReconnectionState::from_tree(const NetworkGraph& g,
                                               RootedTree t,
                                               std::set<NodeId> remaining) {
  ReconnectionState s;
  auto ch = t.children();
  for (NodeId v : t.nodes()) {
    auto it = ch.find(v);
    bool leaf = (it == ch.end() || it->second.empty());
    if (g.is_mc(v) || leaf)
      s.mc_set.insert(v);
    else
      s.mi_set.insert(v);
  }
  s.tree = std::move(t);
  s.remaining = std::move(remaining);
  return s;
}

std::optional<ScpResult> scp(NodeId u, const ReconnectionState& state,
                             const NetworkGraph& g) {
  if (state.tree.contains(u))
    throw InvariantError("scp: node " + std::to_string(u) +
                         " is already in the tree");
  ShortestPathMap spm =
      shortest_path_map(g, u, Metric::kCost, state.mi_set);
  bool found = false;
  Rational best{0};
  for (NodeId c : state.mc_set) {
    if (!spm.reached(c)) continue;
    if (!found || spm.dist.at(c) < best) {
      best = spm.dist.at(c);
      found = true;
    }
  }
  if (!found) return std::nullopt;
  ScpResult res;
  res.length = best;
  for (NodeId c : state.mc_set) {  // ascending
    if (spm.reached(c) && spm.dist.at(c) == best) res.tied_connectors.push_back(c);
  }
  res.connector = res.tied_connectors.front();
  res.path = spm.walk(res.connector);           // u..connector
  std::reverse(res.path.begin(), res.path.end());  // connector..u
  return res;
}

LightForest reconnect(const NetworkGraph& g, NodeId source,
                      std::optional<LightTree> seed, std::set<NodeId> remaining,
                      ReconnectTies ties) {
  if (!g.has_node(source)) throw InvariantError("reconnect: bad source");
  if (seed && seed->tree.root != source)
    throw InvariantError("reconnect: seed tree not rooted at source");

  LightForest forest;
  forest.session.source = source;
  forest.session.dests = remaining;
  if (seed)
    forest.session.dests.insert(seed->served.begin(), seed->served.end());

  ShortestPathMap dist_s = shortest_path_map(g, source, Metric::kCost);

  RootedTree tp = seed ? seed->tree : RootedTree{source, {}};
  std::set<NodeId> served = seed ? seed->served : std::set<NodeId>{};
  ReconnectionState state = ReconnectionState::from_tree(g, tp, remaining);

  while (true) {
    // SCP for every remaining destination.
    struct Candidate {
      NodeId dest;
      ScpResult scp;
    };
    std::vector<Candidate> cands;
    for (NodeId d : state.remaining) {  // ascending
      auto r = scp(d, state, g);
      if (r) cands.push_back({d, std::move(*r)});
    }
    if (cands.empty()) {
      if (!state.remaining.empty()) {
        // Close this tree and start a fresh one at {source}.
        forest.trees.push_back({tp, served});
        tp = RootedTree{source, {}};
        served.clear();
        state = ReconnectionState::from_tree(g, tp, state.remaining);
        continue;
      }
      break;
    }
    Rational min_len = cands.front().scp.length;
    for (const auto& c : cands) min_len = std::min(min_len, c.scp.length);

    const Candidate* pick = nullptr;
    for (const auto& c : cands) {
      if (c.scp.length != min_len) continue;
      if (!pick) {
        pick = &c;
      } else if (ties == ReconnectTies::kDistance) {
        // Tie: destination nearest to the source in G, then smaller id.
        const Rational& dp = dist_s.dist.at(pick->dest);
        const Rational& dc = dist_s.dist.at(c.dest);
        if (dc < dp || (dc == dp && c.dest < pick->dest)) pick = &c;
      }
      // kPlain: candidates are in ascending dest order; first tied wins.
    }

    NodeId connector = pick->scp.connector;
    if (ties == ReconnectTies::kDistance &&
        pick->scp.tied_connectors.size() > 1) {
      // Tie: connector nearest to the source along the tree (delay
      // metric), then smaller id.
      std::map<NodeId, Rational> tdel = tp.depths(g, Metric::kDelay);
      connector = pick->scp.tied_connectors.front();
      for (NodeId c : pick->scp.tied_connectors) {
        if (tdel.at(c) < tdel.at(connector)) connector = c;
      }
    }

    std::vector<NodeId> path;
    if (connector == pick->scp.connector) {
      path = pick->scp.path;  // connector..dest
    } else {
      ShortestPathMap spm =
          shortest_path_map(g, pick->dest, Metric::kCost, state.mi_set);
      path = spm.walk(connector);
      std::reverse(path.begin(), path.end());
    }

    // Graft the path and serve every remaining destination it passes.
    for (std::size_t i = 1; i < path.size(); ++i)
      tp.parent[path[i]] = path[i - 1];
    std::set<NodeId> rem = state.remaining;
    for (std::size_t i = 1; i < path.size(); ++i) {
      if (rem.erase(path[i])) served.insert(path[i]);
    }
    state = ReconnectionState::from_tree(g, tp, std::move(rem));
  }
  forest.trees.push_back({std::move(tp), std::move(served)});
  return forest;
}

MetricsReport metrics(const LightForest& f, const NetworkGraph& g) {
  if (f.session.dests.empty())
    throw InvariantError("metrics: session has no destinations");
  MetricsReport rep;
  rep.stress = f.stress();
  std::map<NodeId, Rational> delay;
  for (const LightTree& t : f.trees) {
    for (const auto& [c, p] : t.tree.parent) rep.total_cost += g.edge_cost(c, p);
    std::map<NodeId, Rational> td = t.tree.depths(g, Metric::kDelay);
    for (NodeId d : t.served) {
      auto it = td.find(d);
      if (it == td.end())
        throw InvariantError("metrics: served destination " +
                             std::to_string(d) + " not in its tree");
      if (!delay.emplace(d, it->second).second)
        throw InvariantError("metrics: destination " + std::to_string(d) +
                             " served twice");
    }
  }
  Rational total{0};
  for (NodeId d : f.session.dests) {
    auto it = delay.find(d);
    if (it == delay.end())
      throw InvariantError("metrics: destination " + std::to_string(d) +
                           " not served by any tree");
    total += it->second;
    rep.max_delay = std::max(rep.max_delay, it->second);
  }
  if (delay.size() != f.session.dests.size())
    throw InvariantError("metrics: served set differs from session dests");
  rep.aver_delay =
      total / Rational(static_cast<long long>(f.session.dests.size()));
  return rep;
}

int link_stress_per_fiber(const LightForest& f) {
  std::map<std::pair<NodeId, NodeId>, int> mult;
  for (const LightTree& t : f.trees)
    for (const auto& [c, p] : t.tree.parent) ++mult[std::minmax(c, p)];
  int best = 0;
  for (const auto& [e, k] : mult) best = std::max(best, k);
  return best;
}

std::string serialize_forest(const LightForest& f) {
  std::ostringstream out;
  for (std::size_t i = 0; i < f.trees.size(); ++i) {
    const LightTree& t = f.trees[i];
    out << "tree " << i << ":";
    // Edges in BFS order (parent printed first), children ascending.
    auto ch = t.tree.children();
    for (NodeId u : t.tree.bfs_order()) {
      auto it = ch.find(u);
      if (it == ch.end()) continue;
      for (NodeId c : it->second) out << " edge " << u << "-" << c;
    }
    out << "; serves ";
    bool first = true;
    for (NodeId d : t.served) {
      if (!first) out << ",";
      out << d;
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

void validate_forest(const LightForest& f, const NetworkGraph& g) {
  const MulticastSession& ms = f.session;
  if (!g.has_node(ms.source))
    throw InvariantError("forest: session source not in graph");
  if (ms.dests.empty()) throw InvariantError("forest: empty destination set");
  if (ms.dests.count(ms.source))
    throw InvariantError("forest: source listed as destination");
  for (NodeId d : ms.dests) {
    if (!g.has_node(d))
      throw InvariantError("forest: destination not in graph");
  }
  if (f.trees.empty()) throw InvariantError("forest: no trees");

  std::set<NodeId> all_served;
  for (std::size_t i = 0; i < f.trees.size(); ++i) {
    const LightTree& t = f.trees[i];
    const std::string tag = "tree " + std::to_string(i);
    if (t.tree.root != ms.source)
      throw InvariantError("forest: " + tag + " not rooted at the source");
    std::set<NodeId> nodes = t.tree.nodes();
    for (NodeId v : nodes) {
      if (!g.has_node(v))
        throw InvariantError("forest: " + tag + " contains unknown node");
      t.tree.path_from_root(v);  // throws on cycles / broken chains
    }
    std::map<NodeId, int> out_deg;
    for (const auto& [c, p] : t.tree.parent) {
      if (!g.has_edge(c, p))
        throw InvariantError("forest: " + tag + " uses non-edge " +
                             std::to_string(p) + "-" + std::to_string(c));
      ++out_deg[p];
    }
    for (const auto& [v, k] : out_deg) {
      if (k > 1 && !g.is_mc(v))
        throw InvariantError("forest: " + tag + " splits at MI node " +
                             std::to_string(v));
    }
    for (NodeId d : t.served) {
      if (!nodes.count(d))
        throw InvariantError("forest: " + tag + " serves node " +
                             std::to_string(d) + " outside itself");
      if (!ms.dests.count(d))
        throw InvariantError("forest: " + tag + " serves a non-destination");
      if (!all_served.insert(d).second)
        throw InvariantError("forest: destination " + std::to_string(d) +
                             " served by two trees");
    }
  }
  if (all_served != ms.dests)
    throw InvariantError("forest: served sets do not cover all destinations");
}

}  // namespace mcast
