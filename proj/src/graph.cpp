#include "mcast/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mcast {

namespace {

Rational edge_len(const NetworkGraph& g, NodeId u, NodeId v, Metric metric) {
  return metric == Metric::kCost ? g.edge_cost(u, v) : g.edge_delay(u, v);
}

}  // namespace

NetworkGraph::NetworkGraph(int node_count, std::vector<EdgeRecord> edges,
                           std::set<NodeId> mc_nodes)
    : node_count_(node_count),
      edges_(std::move(edges)),
      mc_nodes_(std::move(mc_nodes)) {
  if (node_count_ < 1) throw TopologyError("node count must be >= 1");
  adj_.assign(node_count_ + 1, {});
  int idx = 0;
  for (const auto& e : edges_) {
    if (!has_node(e.u) || !has_node(e.v))
      throw TopologyError("edge " + std::to_string(e.u) + "-" +
                          std::to_string(e.v) + ": endpoint out of range");
    if (e.u == e.v)
      throw TopologyError("self-loop at node " + std::to_string(e.u));
    if (e.cost <= Rational(0) || e.delay <= Rational(0))
      throw TopologyError("edge " + std::to_string(e.u) + "-" +
                          std::to_string(e.v) +
                          ": cost and delay must be positive");
    auto key = std::minmax(e.u, e.v);
    if (!edge_index_.emplace(key, idx).second)
      throw TopologyError("duplicate edge " + std::to_string(e.u) + "-" +
                          std::to_string(e.v));
    adj_[e.u].push_back(e.v);
    adj_[e.v].push_back(e.u);
    ++idx;
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  for (NodeId v : mc_nodes_) {
    if (!has_node(v))
      throw TopologyError("mc node " + std::to_string(v) + " out of range");
  }
  std::set<NodeId> seen{1};
  std::vector<NodeId> stack{1};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId w : adj_[u]) {
      if (seen.insert(w).second) stack.push_back(w);
    }
  }
  if (static_cast<int>(seen.size()) != node_count_)
    throw TopologyError("graph is not connected");
}

NetworkGraph NetworkGraph::parse_topology(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int node_count = -1;
  std::vector<EdgeRecord> edges;
  std::set<std::pair<NodeId, NodeId>> edge_keys;
  std::set<NodeId> mc;

  auto fail = [&](const std::string& msg) {
    throw TopologyError("line " + std::to_string(line_no) + ": " + msg);
  };
  auto parse_id = [&](const std::string& tok) -> NodeId {
    try {
      std::size_t pos = 0;
      long long v = std::stoll(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      if (v < 1 || v > node_count)
        fail("node id " + tok + " out of range 1.." +
             std::to_string(node_count));
      return static_cast<NodeId>(v);
    } catch (const TopologyError&) {
      throw;
    } catch (const std::exception&) {
      fail("bad node id '" + tok + "'");
    }
    return 0;  // unreachable
  };

  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "nodes") {
      if (node_count >= 0) fail("duplicate 'nodes' line");
      long long n = 0;
      std::string tok, extra;
      if (!(ls >> tok)) fail("expected 'nodes <N>'");
      try {
        std::size_t pos = 0;
        n = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        fail("bad node count '" + tok + "'");
      }
      if (n < 1) fail("node count must be >= 1");
      if (ls >> extra) fail("trailing tokens after 'nodes'");
      node_count = static_cast<int>(n);
    } else if (node_count < 0) {
      fail("'" + word + "' before 'nodes'");
    } else if (word == "mc") {
      std::string tok;
      bool any = false;
      while (ls >> tok) {
        any = true;
        mc.insert(parse_id(tok));
      }
      if (!any) fail("'mc' line lists no nodes");
    } else if (word == "edge") {
      std::string tu, tv;
      if (!(ls >> tu >> tv)) fail("expected 'edge <u> <v> [cost] [delay]'");
      EdgeRecord e;
      e.u = parse_id(tu);
      e.v = parse_id(tv);
      if (e.u == e.v) fail("self-loop at node " + tu);
      std::string tok;
      if (ls >> tok) {
        try {
          e.cost = parse_rational(tok);
        } catch (const std::exception&) {
          fail("bad cost '" + tok + "'");
        }
        if (ls >> tok) {
          try {
            e.delay = parse_rational(tok);
          } catch (const std::exception&) {
            fail("bad delay '" + tok + "'");
          }
          std::string extra;
          if (ls >> extra) fail("trailing tokens after edge");
        }
      }
      if (e.cost <= Rational(0) || e.delay <= Rational(0))
        fail("cost and delay must be positive");
      if (!edge_keys.insert(std::minmax(e.u, e.v)).second)
        fail("duplicate edge " + tu + "-" + tv);
      edges.push_back(e);
    } else {
      fail("unknown directive '" + word + "'");
    }
  }
  if (node_count < 0) throw TopologyError("missing 'nodes' line");
  return NetworkGraph(node_count, std::move(edges), std::move(mc));
}

NetworkGraph NetworkGraph::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open topology file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_topology(buf.str());
}

std::string NetworkGraph::serialize() const {
  std::ostringstream out;
  out << "nodes " << node_count_ << "\n";
  if (!mc_nodes_.empty()) {
    out << "mc";
    for (NodeId v : mc_nodes_) out << " " << v;
    out << "\n";
  }
  for (const auto& e : edges_) {
    out << "edge " << e.u << " " << e.v;
    if (e.delay != Rational(1))
      out << " " << format_exact(e.cost) << " " << format_exact(e.delay);
    else if (e.cost != Rational(1))
      out << " " << format_exact(e.cost);
    out << "\n";
  }
  return out.str();
}

const std::vector<NodeId>& NetworkGraph::neighbors(NodeId v) const {
  require_node(v, "neighbors");
  return adj_[v];
}

int NetworkGraph::degree(NodeId v) const {
  require_node(v, "degree");
  return static_cast<int>(adj_[v].size());
}

bool NetworkGraph::has_edge(NodeId u, NodeId v) const {
  return edge_index_.count(std::minmax(u, v)) > 0;
}

const Rational& NetworkGraph::edge_cost(NodeId u, NodeId v) const {
  auto it = edge_index_.find(std::minmax(u, v));
  if (it == edge_index_.end())
    throw InvariantError("edge_cost: no edge " + std::to_string(u) + "-" +
                         std::to_string(v));
  return edges_[it->second].cost;
}

const Rational& NetworkGraph::edge_delay(NodeId u, NodeId v) const {
  auto it = edge_index_.find(std::minmax(u, v));
  if (it == edge_index_.end())
    throw InvariantError("edge_delay: no edge " + std::to_string(u) + "-" +
                         std::to_string(v));
  return edges_[it->second].delay;
}

NetworkGraph NetworkGraph::with_mc(std::set<NodeId> mc_nodes) const {
  NetworkGraph g = *this;
  for (NodeId v : mc_nodes) {
    if (!g.has_node(v))
      throw TopologyError("mc node " + std::to_string(v) + " out of range");
  }
  g.mc_nodes_ = std::move(mc_nodes);
  return g;
}

void NetworkGraph::require_node(NodeId v, const char* what) const {
  if (!has_node(v))
    throw InvariantError(std::string(what) + ": node " + std::to_string(v) +
                         " not in graph");
}

std::vector<NodeId> ShortestPathMap::walk(NodeId v) const {
  if (!reached(v))
    throw InvariantError("walk: node " + std::to_string(v) + " unreachable");
  std::vector<NodeId> path{v};
  while (v != source) {
    auto it = parent.find(v);
    if (it == parent.end()) throw InvariantError("walk: broken parent chain");
    v = it->second;
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

ShortestPathMap shortest_path_map(const NetworkGraph& g, NodeId source,
                                  Metric metric,
                                  const std::set<NodeId>& blocked) {
  if (!g.has_node(source))
    throw InvariantError("shortest_path_map: bad source");
  if (blocked.count(source))
    throw InvariantError("shortest_path_map: source is blocked");
  ShortestPathMap out;
  out.source = source;
  out.dist[source] = Rational(0);
  std::set<NodeId> done;
  while (true) {
    // Ascending map order makes the first strict minimum the smallest id.
    NodeId u = 0;
    const Rational* best = nullptr;
    for (const auto& [v, dv] : out.dist) {
      if (done.count(v)) continue;
      if (!best || dv < *best) {
        best = &dv;
        u = v;
      }
    }
    if (!best) break;
    done.insert(u);
    const Rational du = out.dist.at(u);
    for (NodeId w : g.neighbors(u)) {
      if (done.count(w) || blocked.count(w)) continue;
      Rational nd = du + edge_len(g, u, w, metric);
      auto it = out.dist.find(w);
      if (it == out.dist.end() || nd < it->second) {
        out.dist[w] = nd;
        out.parent[w] = u;
      } else if (nd == it->second && u < out.parent.at(w)) {
        out.parent[w] = u;
      }
    }
  }
  return out;
}

PathResult shortest_path(const NetworkGraph& g, NodeId u, NodeId v,
                         Metric metric) {
  if (!g.has_node(u) || !g.has_node(v))
    throw InvariantError("shortest_path: node not in graph");
  ShortestPathMap to_v = shortest_path_map(g, v, metric);
  if (!to_v.reached(u)) throw InvariantError("shortest_path: no path");
  PathResult res;
  res.length = to_v.dist.at(u);
  // Greedy forward walk: at each step take the smallest-id neighbor that
  // still lies on some minimal path; this is the lexicographically smallest
  // minimal node sequence.
  NodeId cur = u;
  res.path.push_back(cur);
  while (cur != v) {
    NodeId next = 0;
    bool found = false;
    for (NodeId w : g.neighbors(cur)) {
      if (!to_v.reached(w)) continue;
      if (edge_len(g, cur, w, metric) + to_v.dist.at(w) == to_v.dist.at(cur)) {
        next = w;
        found = true;
        break;
      }
    }
    if (!found) throw InvariantError("shortest_path: walk stuck");
    cur = next;
    res.path.push_back(cur);
  }
  return res;
}

ArticulationReport articulation_analysis(const NetworkGraph& g, NodeId source,
                                         const std::set<NodeId>& targets) {
  if (!g.has_node(source))
    throw InvariantError("articulation_analysis: bad source");
  ArticulationReport rep;
  rep.source = source;
  for (NodeId u : targets) {
    if (!g.has_node(u))
      throw InvariantError("articulation_analysis: bad target");
    rep.separators[u];  // default-empty
  }
  for (NodeId m = 1; m <= g.node_count(); ++m) {
    if (m == source) continue;
    std::set<NodeId> seen{source};
    std::vector<NodeId> stack{source};
    while (!stack.empty()) {
      NodeId x = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(x)) {
        if (w != m && seen.insert(w).second) stack.push_back(w);
      }
    }
    for (NodeId u : targets) {
      if (u != m && !seen.count(u)) rep.separators[u].insert(m);
    }
  }
  return rep;
}

void check_reference_degree_profile(const NetworkGraph& g) {
  if (g.node_count() == 14) {
    for (NodeId v = 1; v <= 14; ++v) {
      bool hub = (v == 6 || v == 10);
      if (hub && g.degree(v) != 4)
        throw TopologyError("reference profile: node " + std::to_string(v) +
                            " must have degree 4");
      if (!hub && g.degree(v) > 3)
        throw TopologyError("reference profile: node " + std::to_string(v) +
                            " must have degree <= 3");
    }
  } else if (g.node_count() == 28) {
    static const std::set<NodeId> kHubs = {10, 12, 13, 14, 15, 18, 21, 26};
    for (NodeId v = 1; v <= 28; ++v) {
      bool hub = kHubs.count(v) > 0;
      if (hub && g.degree(v) < 4)
        throw TopologyError("reference profile: node " + std::to_string(v) +
                            " must have degree >= 4");
      if (!hub && g.degree(v) > 3)
        throw TopologyError("reference profile: node " + std::to_string(v) +
                            " must have degree <= 3");
    }
  }
}

}  // namespace mcast
