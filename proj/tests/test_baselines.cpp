#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mcast/baselines.hpp"

#include <algorithm>
#include <map>
#include <optional>
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

MulticastSession random_session(std::mt19937& rng, int n) {
  MulticastSession ms;
  ms.source = 1 + static_cast<int>(rng() % n);
  for (NodeId v = 1; v <= n; ++v)
    if (v != ms.source && rng() % 2) ms.dests.insert(v);
  if (ms.dests.empty()) ms.dests.insert(ms.source == 1 ? 2 : 1);
  return ms;
}

std::set<NodeId> all_nodes(int n) {
  std::set<NodeId> out;
  for (NodeId v = 1; v <= n; ++v) out.insert(v);
  return out;
}

// Minimum spanning tree weight of the subgraph induced by `nodes`, or
// nullopt if that subgraph is disconnected (Prim).
std::optional<Rational> induced_mst(const NetworkGraph& g,
                                    const std::set<NodeId>& nodes) {
  if (nodes.empty()) return std::nullopt;
  std::set<NodeId> in = {*nodes.begin()};
  Rational total(0);
  while (in.size() < nodes.size()) {
    std::optional<Rational> best;
    NodeId pick = 0;
    for (NodeId u : in)
      for (NodeId v : g.neighbors(u)) {
        if (!nodes.count(v) || in.count(v)) continue;
        Rational w = g.edge_cost(u, v);
        if (!best || w < *best) {
          best = w;
          pick = v;
        }
      }
    if (!best) return std::nullopt;
    total += *best;
    in.insert(pick);
  }
  return total;
}

// Optimal Steiner tree cost by enumeration over supersets of the terminals.
Rational steiner_opt(const NetworkGraph& g, const std::set<NodeId>& terminals) {
  int n = g.node_count();
  std::vector<NodeId> optional_nodes;
  for (NodeId v = 1; v <= n; ++v)
    if (!terminals.count(v)) optional_nodes.push_back(v);
  std::optional<Rational> best;
  for (unsigned mask = 0; mask < (1u << optional_nodes.size()); ++mask) {
    std::set<NodeId> w = terminals;
    for (std::size_t i = 0; i < optional_nodes.size(); ++i)
      if (mask & (1u << i)) w.insert(optional_nodes[i]);
    auto mst = induced_mst(g, w);
    if (mst && (!best || *mst < *best)) best = *mst;
  }
  REQUIRE(best.has_value());
  return *best;
}

}  // namespace

TEST_CASE("algorithm names round-trip") {
  for (AlgorithmId id : kAllAlgorithms) {
    auto back = parse_algorithm(to_string(id));
    REQUIRE(back.has_value());
    CHECK(*back == id);
  }
  CHECK(to_string(AlgorithmId::kMibPro) == "MIBPro");
  CHECK(to_string(AlgorithmId::kR2S) == "R2S");
  CHECK_FALSE(parse_algorithm("mibpro").has_value());  // names are exact
  CHECK_FALSE(parse_algorithm("").has_value());
  CHECK_FALSE(parse_algorithm("Steiner").has_value());
}

TEST_CASE("all-MC network: MIBPro returns the pruned SPT on one wavelength") {
  NetworkGraph g = NetworkGraph::load_file(data_path("nsf.topo"));
  g = g.with_mc(all_nodes(14));
  std::mt19937 rng(8u);
  for (int trial = 0; trial < 20; ++trial) {
    MulticastSession ms = random_session(rng, 14);
    LightForest f = mibpro(g, ms);
    validate_forest(f, g);
    REQUIRE(f.stress() == 1);
    RootedTree want =
        prune_spt(dijkstra_pro_spt(g, ms.source, ms.dests).tree, ms.dests);
    CHECK(f.trees[0].tree.parent == want.parent);
    CHECK(f.trees[0].served == ms.dests);

    // Without MIB nodes the delete-all variant changes nothing.
    CHECK(serialize_forest(mibpro2(g, ms)) == serialize_forest(f));
  }
}

TEST_CASE("walkthrough session: three delay levels on the 14-node topology") {
  // Source 10 multicasting to {6,11,13,14} with splitters at {1,8,10}:
  // the distance-based pipeline reaches mean delay 6/4, the plain greedy
  // 7/4, and both keep the minimal total cost of 4. Reroute-to-Source pays
  // one extra edge for its lower-bound delays.
  NetworkGraph g = NetworkGraph::load_file(data_path("nsf.topo"))
                       .with_mc({1, 8, 10});
  MulticastSession ms{10, {6, 11, 13, 14}};

  MetricsReport pro = metrics(mibpro(g, ms), g);
  CHECK(pro.stress == 1);
  CHECK(pro.total_cost == Rational(4));
  CHECK(pro.aver_delay == Rational(3, 2));
  CHECK(pro.max_delay == Rational(2));

  MetricsReport mo = metrics(member_only(g, ms), g);
  CHECK(mo.total_cost == Rational(4));
  CHECK(mo.aver_delay == Rational(7, 4));

  MetricsReport r2s = metrics(reroute_to_source(g, ms), g);
  CHECK(r2s.total_cost == Rational(5));
  CHECK(r2s.aver_delay == Rational(3, 2));  // per-dest shortest-path delays
}

TEST_CASE("R2S delays equal the graph shortest-path delays exactly") {
  std::mt19937 rng(1234u);
  for (const char* file : {"nsf.topo", "longhaul.topo"}) {
    NetworkGraph base = NetworkGraph::load_file(data_path(file));
    for (int trial = 0; trial < 25; ++trial) {
      int n = base.node_count();
      std::set<NodeId> mc;
      for (NodeId v = 1; v <= n; ++v)
        if (rng() % 3 == 0) mc.insert(v);
      NetworkGraph g = base.with_mc(mc);
      MulticastSession ms = random_session(rng, n);

      LightForest f = reroute_to_source(g, ms);
      validate_forest(f, g);
      ShortestPathMap ref =
          shortest_path_map(g, ms.source, Metric::kDelay);
      for (const LightTree& t : f.trees) {
        auto depth = t.tree.depths(g, Metric::kDelay);
        for (NodeId d : t.served) CHECK(depth.at(d) == ref.dist.at(d));
      }

      // Those delays are lower bounds for every algorithm.
      MetricsReport r2s = metrics(f, g);
      for (AlgorithmId id : kAllAlgorithms) {
        MetricsReport m = metrics(run_algorithm(id, g, ms), g);
        CHECK(r2s.aver_delay <= m.aver_delay);
        CHECK(r2s.max_delay <= m.max_delay);
      }
    }
  }
}

TEST_CASE("R2S spawns one wavelength per cut branch on an MI star") {
  NetworkGraph star(4, {{1, 2, Rational(1), Rational(1)},
                        {1, 3, Rational(1), Rational(1)},
                        {1, 4, Rational(1), Rational(1)}});
  MulticastSession ms{1, {2, 3, 4}};
  LightForest f = reroute_to_source(star, ms);
  validate_forest(f, star);
  CHECK(f.stress() == 3);
  MetricsReport m = metrics(f, star);
  CHECK(m.aver_delay == Rational(1));
  CHECK(m.max_delay == Rational(1));
}

TEST_CASE("R2A equals the hand-composed plain pipeline on MIB-free trees") {
  std::mt19937 rng(55u);
  int covered = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int n = 4 + static_cast<int>(rng() % 6);
    NetworkGraph g = random_graph(rng, n, 3, true);
    // All-MC instances are guaranteed MIB-free; mixed ones often are.
    if (trial % 2 == 0) g = g.with_mc(all_nodes(n));
    MulticastSession ms = random_session(rng, n);

    RootedTree pruned =
        prune_spt(dijkstra_spt(g, ms.source).tree, ms.dests);
    if (!mib_census(g, pruned).empty()) continue;
    ++covered;

    CutResult cut =
        process_mib_nodes(pruned, g, ms.source, ms.dests, MibMode::kMibPro);
    LightTree seed;
    seed.tree = cut.subtree;
    for (NodeId d : ms.dests)
      if (cut.subtree.contains(d)) seed.served.insert(d);
    LightForest composed = reconnect(g, ms.source, seed,
                                     cut.cut_destinations,
                                     ReconnectTies::kPlain);
    CHECK(serialize_forest(reroute_to_any(g, ms)) ==
          serialize_forest(composed));
  }
  CHECK(covered >= 20);  // the comparison must actually fire
}

TEST_CASE("member_only on a single destination is the shortest path") {
  std::mt19937 rng(90u);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + static_cast<int>(rng() % 7);
    NetworkGraph g = random_graph(rng, n, 3, true);
    NodeId s = 1 + static_cast<int>(rng() % n);
    NodeId d = 1 + static_cast<int>(rng() % n);
    if (d == s) continue;
    LightForest f = member_only(g, {s, {d}});
    validate_forest(f, g);
    CHECK(f.stress() == 1);
    CHECK(metrics(f, g).total_cost == shortest_path(g, s, d).length);
  }
}

TEST_CASE("member_only cost is within twice the optimal Steiner cost") {
  std::mt19937 rng(321u);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int n = 5 + static_cast<int>(rng() % 4);  // 5..8 nodes
    NetworkGraph g =
        random_graph(rng, n, 3, true).with_mc(all_nodes(n));
    MulticastSession ms = random_session(rng, n);
    std::set<NodeId> terminals = ms.dests;
    terminals.insert(ms.source);
    if (terminals.size() < 3) continue;
    ++checked;

    Rational opt = steiner_opt(g, terminals);
    Rational got = metrics(member_only(g, ms), g).total_cost;
    CAPTURE(trial);
    CHECK(got >= opt);
    CHECK(got <= Rational(2) * opt);
  }
  CHECK(checked >= 30);
}

TEST_CASE("stress stays within [1, |D|] for every algorithm") {
  std::mt19937 rng(777u);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 4 + static_cast<int>(rng() % 7);
    NetworkGraph g = random_graph(rng, n, 2, false);
    std::set<NodeId> mc;
    for (NodeId v = 1; v <= n; ++v)
      if (rng() % 4 == 0) mc.insert(v);
    g = g.with_mc(mc);
    MulticastSession ms = random_session(rng, n);
    for (AlgorithmId id : kAllAlgorithms) {
      LightForest f = run_algorithm(id, g, ms);
      validate_forest(f, g);
      CHECK(f.stress() >= 1);
      CHECK(f.stress() <= static_cast<int>(ms.dests.size()));
    }
  }
}

TEST_CASE("every algorithm is a pure function of its inputs") {
  std::mt19937 rng(31337u);
  NetworkGraph base = NetworkGraph::load_file(data_path("nsf.topo"));
  for (int trial = 0; trial < 10; ++trial) {
    std::set<NodeId> mc;
    for (NodeId v = 1; v <= 14; ++v)
      if (rng() % 3 == 0) mc.insert(v);
    NetworkGraph g = base.with_mc(mc);
    MulticastSession ms = random_session(rng, 14);
    for (AlgorithmId id : kAllAlgorithms) {
      LightForest a = run_algorithm(id, g, ms);
      LightForest b = run_algorithm(id, g, ms);
      CHECK(serialize_forest(a) == serialize_forest(b));
      CHECK(a.session.dests == b.session.dests);
    }
  }
}

TEST_CASE("run_algorithm dispatches to the named implementations") {
  NetworkGraph g = NetworkGraph::load_file(data_path("nsf.topo"))
                       .with_mc({1, 8, 10});
  MulticastSession ms{10, {6, 11, 13, 14}};
  CHECK(serialize_forest(run_algorithm(AlgorithmId::kMibPro, g, ms)) ==
        serialize_forest(mibpro(g, ms)));
  CHECK(serialize_forest(run_algorithm(AlgorithmId::kMO, g, ms)) ==
        serialize_forest(member_only(g, ms)));
  CHECK(serialize_forest(run_algorithm(AlgorithmId::kR2S, g, ms)) ==
        serialize_forest(reroute_to_source(g, ms)));
  CHECK(serialize_forest(run_algorithm(AlgorithmId::kR2A, g, ms)) ==
        serialize_forest(reroute_to_any(g, ms)));
  CHECK(serialize_forest(run_algorithm(AlgorithmId::kMibPro2, g, ms)) ==
        serialize_forest(mibpro2(g, ms)));
}
