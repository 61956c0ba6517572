#include "mcast/spt.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace mcast {

namespace {

std::vector<NodeId> sorted_children(const std::map<NodeId, NodeId>& parent,
                                    NodeId x) {
  std::vector<NodeId> out;
  for (const auto& [c, p] : parent) {
    if (p == x) out.push_back(c);  // map order: already ascending
  }
  return out;
}

}  // namespace

std::set<NodeId> RootedTree::nodes() const {
  std::set<NodeId> out{root};
  for (const auto& [c, p] : parent) out.insert(c);
  return out;
}

std::map<NodeId, std::vector<NodeId>> RootedTree::children() const {
  std::map<NodeId, std::vector<NodeId>> ch;
  for (const auto& [c, p] : parent) ch[p].push_back(c);  // ascending by map
  return ch;
}

std::vector<NodeId> RootedTree::bfs_order() const {
  auto ch = children();
  std::vector<NodeId> order;
  std::deque<NodeId> q{root};
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop_front();
    order.push_back(u);
    auto it = ch.find(u);
    if (it != ch.end())
      for (NodeId c : it->second) q.push_back(c);
  }
  return order;
}

std::vector<NodeId> RootedTree::path_from_root(NodeId v) const {
  if (!contains(v))
    throw InvariantError("path_from_root: node " + std::to_string(v) +
                         " not in tree");
  std::vector<NodeId> path{v};
  std::size_t guard = parent.size() + 1;
  while (v != root) {
    auto it = parent.find(v);
    if (it == parent.end())
      throw InvariantError("path_from_root: broken parent chain");
    v = it->second;
    path.push_back(v);
    if (path.size() > guard)
      throw InvariantError("path_from_root: cycle in parent map");
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::map<NodeId, Rational> RootedTree::depths(const NetworkGraph& g,
                                              Metric metric) const {
  std::map<NodeId, Rational> d;
  d[root] = Rational(0);
  auto ch = children();
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    auto it = ch.find(u);
    if (it == ch.end()) continue;
    for (NodeId c : it->second) {
      d[c] = d.at(u) + (metric == Metric::kCost ? g.edge_cost(u, c)
                                                : g.edge_delay(u, c));
      stack.push_back(c);
    }
  }
  if (d.size() != parent.size() + 1)
    throw InvariantError("depths: parent map is not a connected tree");
  return d;
}

SptTree dijkstra_spt(const NetworkGraph& g, NodeId source) {
  ShortestPathMap spm = shortest_path_map(g, source, Metric::kCost);
  SptTree t;
  t.tree.root = source;
  t.tree.parent = spm.parent;
  t.dist = spm.dist;
  return t;
}

SptTree dijkstra_pro_spt(const NetworkGraph& g, NodeId source,
                         const std::set<NodeId>& dests,
                         const DijkstraProOptions& opts) {
  if (!g.has_node(source)) throw InvariantError("dijkstra_pro_spt: bad source");
  std::map<NodeId, Rational> dist;
  std::map<NodeId, NodeId> parent;
  std::set<NodeId> perm;
  dist[source] = Rational(0);

  auto label = [&](NodeId u) {
    perm.insert(u);
    const Rational du = dist.at(u);
    for (NodeId w : g.neighbors(u)) {
      if (perm.count(w)) continue;
      Rational nd = du + g.edge_cost(u, w);
      auto it = dist.find(w);
      if (it == dist.end() || nd < it->second) {
        dist[w] = nd;
        parent[w] = u;
      }
      // equal distance: the first claimant keeps the child
    }
  };

  label(source);
  while (true) {
    // Collect the level: all tentative nodes at the current minimum distance.
    const Rational* min_d = nullptr;
    for (const auto& [v, dv] : dist) {
      if (perm.count(v)) continue;
      if (!min_d || dv < *min_d) min_d = &dv;
    }
    if (!min_d) break;
    std::vector<NodeId> level;
    for (const auto& [v, dv] : dist) {
      if (!perm.count(v) && dv == *min_d) level.push_back(v);
    }
    std::sort(level.begin(), level.end(), [&](NodeId a, NodeId b) {
      int ma = (opts.mc_priority && g.is_mc(a)) ? 0 : 1;
      int mb = (opts.mc_priority && g.is_mc(b)) ? 0 : 1;
      if (ma != mb) return ma < mb;
      int da = (opts.degree_priority && !g.is_mc(a)) ? g.degree(a) : 0;
      int db = (opts.degree_priority && !g.is_mc(b)) ? g.degree(b) : 0;
      if (da != db) return da < db;
      return a < b;
    });
    for (NodeId u : level) label(u);

    if (opts.adoption) {
      // Within-level node adoption. Adopters fixed at phase start: level
      // members with no children yet; MI adopters take one child, MC any.
      std::map<NodeId, long long> quota;
      for (NodeId y : level) {
        if (sorted_children(parent, y).empty())
          quota[y] = g.is_mc(y) ? static_cast<long long>(1) << 40 : 1;
      }
      while (true) {
        std::vector<NodeId> donors;
        for (NodeId x : level) {
          if (!g.is_mc(x) && sorted_children(parent, x).size() >= 2)
            donors.push_back(x);
        }
        bool made = false;
        for (NodeId x : donors) {
          while (sorted_children(parent, x).size() >= 2) {
            std::vector<NodeId> ch = sorted_children(parent, x);
            std::stable_sort(ch.begin(), ch.end(), [&](NodeId a, NodeId b) {
              bool da = dests.count(a) > 0, db = dests.count(b) > 0;
              if (da != db) return da;  // destinations first
              return a < b;
            });
            NodeId child = 0, adopter = 0;
            bool found = false;
            for (NodeId c : ch) {
              for (const auto& [y, q] : quota) {  // ascending adopter id
                if (y == x || q <= 0) continue;
                if (g.has_edge(y, c) &&
                    dist.at(y) + g.edge_cost(y, c) == dist.at(c)) {
                  child = c;
                  adopter = y;
                  found = true;
                  break;
                }
              }
              if (found) break;
            }
            if (!found) break;
            parent[child] = adopter;
            --quota[adopter];
            made = true;
          }
        }
        if (!made || donors.empty()) break;
      }
    }
  }
  SptTree t;
  t.tree.root = source;
  t.tree.parent = std::move(parent);
  t.dist = std::move(dist);
  return t;
}

RootedTree prune_spt(const RootedTree& t, const std::set<NodeId>& dests) {
  std::set<NodeId> keep{t.root};
  for (NodeId d : dests) {
    if (!t.contains(d))
      throw InvariantError("prune_spt: destination " + std::to_string(d) +
                           " not in tree");
    NodeId v = d;
    while (!keep.count(v)) {
      keep.insert(v);
      v = t.parent.at(v);
    }
  }
  RootedTree out;
  out.root = t.root;
  for (NodeId v : keep) {
    if (v != t.root) out.parent[v] = t.parent.at(v);
  }
  return out;
}

std::set<NodeId> mib_census(const NetworkGraph& g, const RootedTree& t) {
  std::set<NodeId> mibs;
  for (const auto& [v, ch] : t.children()) {
    if (ch.size() >= 2 && !g.is_mc(v)) mibs.insert(v);
  }
  return mibs;
}

std::vector<RootedTree> split_at_mib_nodes(const NetworkGraph& g,
                                           const RootedTree& t) {
  std::vector<RootedTree> out;
  std::deque<RootedTree> pending{t};
  while (!pending.empty()) {
    RootedTree tp = std::move(pending.front());
    pending.pop_front();
    while (true) {
      auto ch = tp.children();
      // First MIB node in BFS order.
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
      const std::vector<NodeId> kids = ch.at(mib);  // ascending
      const std::vector<NodeId> root_path = tp.path_from_root(mib);
      for (std::size_t i = 1; i < kids.size(); ++i) {
        NodeId c = kids[i];
        // New tree: path root->mib, then the subtree hanging off c.
        RootedTree nt;
        nt.root = tp.root;
        for (std::size_t j = 1; j < root_path.size(); ++j)
          nt.parent[root_path[j]] = root_path[j - 1];
        nt.parent[c] = mib;
        std::vector<NodeId> stack{c};
        while (!stack.empty()) {
          NodeId u = stack.back();
          stack.pop_back();
          auto it = ch.find(u);
          if (it == ch.end()) continue;
          for (NodeId w : it->second) {
            nt.parent[w] = u;
            stack.push_back(w);
          }
        }
        pending.push_back(std::move(nt));
        // Remove subtree(c) from tp.
        std::vector<NodeId> rm{c};
        while (!rm.empty()) {
          NodeId u = rm.back();
          rm.pop_back();
          tp.parent.erase(u);
          auto it = ch.find(u);
          if (it == ch.end()) continue;
          for (NodeId w : it->second) rm.push_back(w);
        }
      }
    }
    out.push_back(std::move(tp));
  }
  return out;
}

int spt_link_stress(const NetworkGraph& g, const RootedTree& t) {
  std::map<std::pair<NodeId, NodeId>, int> mult;
  for (const RootedTree& part : split_at_mib_nodes(g, t)) {
    for (const auto& [c, p] : part.parent) ++mult[std::minmax(c, p)];
  }
  int best = 1;
  for (const auto& [e, k] : mult) best = std::max(best, k);
  return best;
}

}  // namespace mcast
