#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mcast/graph.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

using namespace mcast;

namespace {

std::string data_path(const char* name) {
  return std::string(MCAST_DATA_DIR) + "/" + name;
}

NetworkGraph unit_graph(int n, std::vector<std::pair<int, int>> edges,
                        std::set<NodeId> mc = {}) {
  std::vector<EdgeRecord> recs;
  for (auto [u, v] : edges) recs.push_back({u, v, Rational(1), Rational(1)});
  return NetworkGraph(n, std::move(recs), std::move(mc));
}

// Random connected simple graph: a random spanning tree plus a few extra
// edges, weights drawn from {1,2,3}. mt19937 is fully specified, so these
// instances are identical on every platform.
NetworkGraph random_graph(std::mt19937& rng, int n, int extra_edges,
                          bool random_weights) {
  std::vector<EdgeRecord> recs;
  std::set<std::pair<int, int>> seen;
  auto weight = [&]() {
    return random_weights ? Rational(1 + static_cast<int>(rng() % 3))
                          : Rational(1);
  };
  for (int v = 2; v <= n; ++v) {
    int u = 1 + static_cast<int>(rng() % (v - 1));
    seen.insert(std::minmax(u, v));
    recs.push_back({u, v, weight(), Rational(1)});
  }
  for (int i = 0; i < extra_edges; ++i) {
    int u = 1 + static_cast<int>(rng() % n);
    int v = 1 + static_cast<int>(rng() % n);
    if (u == v || seen.count(std::minmax(u, v))) continue;
    seen.insert(std::minmax(u, v));
    recs.push_back({u, v, weight(), Rational(1)});
  }
  return NetworkGraph(n, std::move(recs));
}

// Every simple u..v path, by depth-first enumeration. Only used on small
// sparse graphs.
void all_simple_paths(const NetworkGraph& g, NodeId v,
                      std::vector<NodeId>& cur, std::set<NodeId>& on_path,
                      std::vector<std::vector<NodeId>>& out) {
  NodeId u = cur.back();
  if (u == v) {
    out.push_back(cur);
    return;
  }
  for (NodeId w : g.neighbors(u)) {
    if (on_path.count(w)) continue;
    on_path.insert(w);
    cur.push_back(w);
    all_simple_paths(g, v, cur, on_path, out);
    cur.pop_back();
    on_path.erase(w);
  }
}

std::vector<std::vector<NodeId>> all_simple_paths(const NetworkGraph& g,
                                                  NodeId u, NodeId v) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> cur = {u};
  std::set<NodeId> on_path = {u};
  all_simple_paths(g, v, cur, on_path, out);
  return out;
}

Rational path_length(const NetworkGraph& g, const std::vector<NodeId>& p,
                     Metric metric) {
  Rational len(0);
  for (std::size_t i = 1; i < p.size(); ++i)
    len += metric == Metric::kCost ? g.edge_cost(p[i - 1], p[i])
                                   : g.edge_delay(p[i - 1], p[i]);
  return len;
}

// Reference answer for shortest_path: minimal length, then lexicographically
// smallest node sequence, over the full simple-path enumeration.
PathResult brute_force_shortest(const NetworkGraph& g, NodeId u, NodeId v) {
  PathResult best;
  bool have = false;
  for (const auto& p : all_simple_paths(g, u, v)) {
    Rational len = path_length(g, p, Metric::kCost);
    if (!have || len < best.length ||
        (len == best.length && p < best.path)) {
      best = {p, len};
      have = true;
    }
  }
  REQUIRE(have);
  return best;
}

}  // namespace

TEST_CASE("two nodes and one bare edge get unit cost and unit delay") {
  NetworkGraph g = NetworkGraph::parse_topology("nodes 2\nedge 1 2\n");
  CHECK(g.node_count() == 2);
  REQUIRE(g.edges().size() == 1);
  CHECK(g.edge_cost(1, 2) == Rational(1));
  CHECK(g.edge_delay(2, 1) == Rational(1));
  CHECK(g.mc_nodes().empty());
  CHECK_FALSE(g.is_mc(1));
}

TEST_CASE("parse_topology handles comments, mc lines and explicit weights") {
  NetworkGraph g = NetworkGraph::parse_topology(
      "# small test net\n"
      "nodes 4\n"
      "mc 2 4\n"
      "\n"
      "edge 1 2 3/2\n"
      "edge 2 3 1 2.5   # weighted both ways\n"
      "edge 3 4\n");
  CHECK(g.node_count() == 4);
  CHECK(g.mc_nodes() == std::set<NodeId>{2, 4});
  CHECK(g.edge_cost(1, 2) == Rational(3, 2));
  CHECK(g.edge_delay(1, 2) == Rational(1));
  CHECK(g.edge_cost(2, 3) == Rational(1));
  CHECK(g.edge_delay(2, 3) == Rational(5, 2));
  CHECK(g.degree(3) == 2);
  CHECK(g.neighbors(2) == std::vector<NodeId>{1, 3});
  CHECK(g.has_edge(4, 3));
  CHECK_FALSE(g.has_edge(1, 4));
}

TEST_CASE("parse_topology reports the offending line") {
  auto message_of = [](const std::string& text) {
    try {
      NetworkGraph::parse_topology(text);
    } catch (const TopologyError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message_of("edge 1 2\n").find("line 1") != std::string::npos);
  CHECK(message_of("nodes 2\nbadword 1 2\n").find("line 2") !=
        std::string::npos);
  CHECK(message_of("nodes 2\nedge 1 3\n").find("out of range") !=
        std::string::npos);
  CHECK(message_of("nodes 2\nedge 1 1\n").find("self-loop") !=
        std::string::npos);
  CHECK(message_of("nodes 2\nedge 1 2\nedge 2 1\n").find("duplicate edge") !=
        std::string::npos);
  CHECK(message_of("nodes 2\nedge 1 2 0\n").find("positive") !=
        std::string::npos);
  CHECK(message_of("nodes 2\nedge 1 2 1 -2\n").find("positive") !=
        std::string::npos);
  CHECK(message_of("nodes 2\nnodes 2\n").find("duplicate 'nodes'") !=
        std::string::npos);
  CHECK(message_of("nodes 2\nedge 1 2 1 1 9\n").find("trailing") !=
        std::string::npos);
  CHECK(message_of("nodes 2\nmc\nedge 1 2\n").find("no nodes") !=
        std::string::npos);
  CHECK_THROWS_AS(NetworkGraph::parse_topology(""), TopologyError);
  // 3 nodes, 1 edge: connectivity is checked after parsing.
  CHECK_THROWS_AS(NetworkGraph::parse_topology("nodes 3\nedge 1 2\n"),
                  TopologyError);
}

TEST_CASE("constructor validates the edge list directly") {
  CHECK_THROWS_AS(NetworkGraph(0, {}), TopologyError);
  CHECK_THROWS_AS(unit_graph(2, {{1, 1}}), TopologyError);
  CHECK_THROWS_AS(unit_graph(2, {{1, 3}}), TopologyError);
  CHECK_THROWS_AS(unit_graph(2, {{1, 2}, {2, 1}}), TopologyError);
  CHECK_THROWS_AS(unit_graph(4, {{1, 2}, {3, 4}}), TopologyError);  // split
  CHECK_THROWS_AS(unit_graph(2, {{1, 2}}, {5}), TopologyError);     // bad mc
  CHECK_THROWS_AS(
      NetworkGraph(2, {{1, 2, Rational(0), Rational(1)}}), TopologyError);
  CHECK_NOTHROW(NetworkGraph(1, {}));  // single node, no edges
}

TEST_CASE("serialize then parse is the identity") {
  std::mt19937 rng(20260814u);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng() % 8);
    NetworkGraph g = random_graph(rng, n, static_cast<int>(rng() % 5), true);
    std::set<NodeId> mc;
    for (NodeId v = 1; v <= n; ++v)
      if (rng() % 2) mc.insert(v);
    g = g.with_mc(mc);

    NetworkGraph h = NetworkGraph::parse_topology(g.serialize());
    CHECK(h.node_count() == g.node_count());
    CHECK(h.mc_nodes() == g.mc_nodes());
    REQUIRE(h.edges().size() == g.edges().size());
    for (const EdgeRecord& e : g.edges()) {
      REQUIRE(h.has_edge(e.u, e.v));
      CHECK(h.edge_cost(e.u, e.v) == e.cost);
      CHECK(h.edge_delay(e.u, e.v) == e.delay);
    }
    CHECK(h.serialize() == g.serialize());
  }
}

TEST_CASE("serialize omits weights only when they are the defaults") {
  NetworkGraph g(3, {{1, 2, Rational(1), Rational(1)},
                     {2, 3, Rational(3, 2), Rational(1)}});
  std::string s = g.serialize();
  CHECK(s.find("edge 1 2\n") != std::string::npos);
  CHECK(s.find("edge 2 3 1.5\n") != std::string::npos);

  NetworkGraph h(2, {{1, 2, Rational(1), Rational(2)}});
  // non-default delay forces both fields
  CHECK(h.serialize().find("edge 1 2 1 2\n") != std::string::npos);
}

TEST_CASE("shipped reference topologies have the documented shape") {
  NetworkGraph nsf = NetworkGraph::load_file(data_path("nsf.topo"));
  CHECK(nsf.node_count() == 14);
  CHECK(nsf.edges().size() == 22);
  CHECK(nsf.degree(6) == 4);
  CHECK(nsf.degree(10) == 4);
  for (NodeId v = 1; v <= 14; ++v) {
    if (v != 6 && v != 10) CHECK(nsf.degree(v) <= 3);
    CHECK(nsf.degree(v) >= 3);
  }
  for (const EdgeRecord& e : nsf.edges()) {
    CHECK(e.cost == Rational(1));
    CHECK(e.delay == Rational(1));
  }
  CHECK_NOTHROW(check_reference_degree_profile(nsf));

  NetworkGraph lh = NetworkGraph::load_file(data_path("longhaul.topo"));
  CHECK(lh.node_count() == 28);
  CHECK(lh.edges().size() == 40);
  const std::set<NodeId> hubs = {10, 12, 13, 14, 15, 18, 21, 26};
  for (NodeId v = 1; v <= 28; ++v) {
    if (hubs.count(v))
      CHECK(lh.degree(v) >= 4);
    else
      CHECK(lh.degree(v) <= 3);
  }
  CHECK_NOTHROW(check_reference_degree_profile(lh));
}

TEST_CASE("check_reference_degree_profile rejects a perturbed 14-node graph") {
  // A 14-node ring has no degree-4 node at positions 6 and 10.
  std::vector<std::pair<int, int>> ring;
  for (int v = 1; v <= 14; ++v) ring.push_back({v, v % 14 + 1});
  NetworkGraph g = unit_graph(14, ring);
  CHECK_THROWS_AS(check_reference_degree_profile(g), TopologyError);
  // Non-reference sizes pass through untouched.
  CHECK_NOTHROW(check_reference_degree_profile(unit_graph(2, {{1, 2}})));
}

TEST_CASE("shortest_path trivia") {
  NetworkGraph path = unit_graph(3, {{1, 2}, {2, 3}});
  PathResult r = shortest_path(path, 1, 3);
  CHECK(r.path == std::vector<NodeId>{1, 2, 3});
  CHECK(r.length == Rational(2));

  PathResult self = shortest_path(path, 2, 2);
  CHECK(self.path == std::vector<NodeId>{2});
  CHECK(self.length == Rational(0));

  // Two equal-length branches: the lexicographically smaller one wins.
  NetworkGraph diamond = unit_graph(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}});
  CHECK(shortest_path(diamond, 1, 4).path == std::vector<NodeId>{1, 2, 4});
  CHECK(shortest_path(diamond, 4, 1).path == std::vector<NodeId>{4, 2, 1});

  // A shorter hop count does not beat a lexicographically smaller detour of
  // equal length.
  NetworkGraph skip(4, {{1, 2, Rational(1), Rational(1)},
                        {2, 4, Rational(1), Rational(1)},
                        {1, 4, Rational(2), Rational(1)},
                        {3, 4, Rational(1), Rational(1)}});
  CHECK(shortest_path(skip, 1, 4).path == std::vector<NodeId>{1, 2, 4});
}

TEST_CASE("shortest_path matches the exhaustive lexicographic oracle") {
  std::mt19937 rng(7u);
  for (int trial = 0; trial < 120; ++trial) {
    int n = 2 + static_cast<int>(rng() % 7);
    NetworkGraph g = random_graph(rng, n, 3, true);
    for (NodeId u = 1; u <= n; ++u)
      for (NodeId v = 1; v <= n; ++v) {
        if (u == v) continue;
        PathResult got = shortest_path(g, u, v);
        PathResult want = brute_force_shortest(g, u, v);
        CAPTURE(trial);
        CAPTURE(u);
        CAPTURE(v);
        CHECK(got.length == want.length);
        CHECK(got.path == want.path);
      }
  }
}

TEST_CASE("shortest_path_map honors blocked nodes") {
  // 1-2-3 plus the detour 1-4-3: blocking 2 forces the detour.
  NetworkGraph g = unit_graph(4, {{1, 2}, {2, 3}, {1, 4}, {4, 3}});
  ShortestPathMap m = shortest_path_map(g, 1, Metric::kCost, {2});
  CHECK_FALSE(m.reached(2));
  REQUIRE(m.reached(3));
  CHECK(m.dist.at(3) == Rational(2));
  CHECK(m.walk(3) == std::vector<NodeId>{1, 4, 3});

  // Blocking both interior nodes isolates 3 entirely.
  ShortestPathMap cut = shortest_path_map(g, 1, Metric::kCost, {2, 4});
  CHECK_FALSE(cut.reached(3));
  CHECK_THROWS_AS(cut.walk(3), InvariantError);

  // A blocked source is a caller bug.
  CHECK_THROWS_AS(shortest_path_map(g, 1, Metric::kCost, {1}), InvariantError);
}

TEST_CASE("shortest_path_map distances agree with the path oracle") {
  std::mt19937 rng(99u);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + static_cast<int>(rng() % 7);
    NetworkGraph g = random_graph(rng, n, 3, true);
    NodeId s = 1 + static_cast<int>(rng() % n);
    ShortestPathMap m = shortest_path_map(g, s);
    for (NodeId v = 1; v <= n; ++v) {
      REQUIRE(m.reached(v));  // connected graph
      Rational best(0);
      bool have = false;
      for (const auto& p : all_simple_paths(g, s, v)) {
        Rational len = path_length(g, p, Metric::kCost);
        if (!have || len < best) best = len, have = true;
      }
      CHECK(m.dist.at(v) == best);
      // The recorded parent chain realizes the distance.
      CHECK(path_length(g, m.walk(v), Metric::kCost) == m.dist.at(v));
    }
  }
}

TEST_CASE("delay metric uses the delay weights") {
  NetworkGraph g(3, {{1, 2, Rational(1), Rational(5)},
                     {2, 3, Rational(1), Rational(1)},
                     {1, 3, Rational(5), Rational(1)}});
  CHECK(shortest_path(g, 1, 3, Metric::kCost).length == Rational(2));
  CHECK(shortest_path(g, 1, 3, Metric::kDelay).length == Rational(1));
  CHECK(shortest_path(g, 1, 3, Metric::kDelay).path ==
        std::vector<NodeId>{1, 3});
}

TEST_CASE("articulation trivia: cycles have no separators, chains do") {
  NetworkGraph cycle = unit_graph(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}});
  ArticulationReport r = articulation_analysis(cycle, 1, {2, 3, 4});
  for (NodeId v : {2, 3, 4}) CHECK(r.separators.at(v).empty());

  NetworkGraph chain = unit_graph(3, {{1, 2}, {2, 3}});
  ArticulationReport c = articulation_analysis(chain, 1, {3});
  CHECK(c.separators.at(3) == std::set<NodeId>{2});
  // Neither the target nor the source may appear in its own separator set.
  CHECK(c.separators.at(3).count(3) == 0);
  CHECK(c.separators.at(3).count(1) == 0);
}

TEST_CASE("articulation matches the all-paths intersection oracle") {
  std::mt19937 rng(4242u);
  for (int trial = 0; trial < 80; ++trial) {
    int n = 3 + static_cast<int>(rng() % 6);
    NetworkGraph g = random_graph(rng, n, 2, false);
    NodeId s = 1 + static_cast<int>(rng() % n);
    std::set<NodeId> targets;
    for (NodeId v = 1; v <= n; ++v)
      if (v != s) targets.insert(v);
    ArticulationReport r = articulation_analysis(g, s, targets);
    for (NodeId u : targets) {
      // x separates u from s iff x lies on every simple s..u path.
      std::set<NodeId> want;
      bool first = true;
      for (const auto& p : all_simple_paths(g, s, u)) {
        std::set<NodeId> nodes(p.begin(), p.end());
        if (first) {
          want = nodes;
          first = false;
        } else {
          std::set<NodeId> both;
          std::set_intersection(want.begin(), want.end(), nodes.begin(),
                                nodes.end(), std::inserter(both, both.end()));
          want = both;
        }
      }
      want.erase(u);
      want.erase(s);
      CAPTURE(trial);
      CAPTURE(u);
      CHECK(r.separators.at(u) == want);
    }
  }
}
