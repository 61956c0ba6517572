#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcast/harness.hpp"

namespace {

using namespace mcast;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

std::set<NodeId> parse_id_list(const std::string& text) {
  std::set<NodeId> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) {
    if (cur.empty()) throw TopologyError("empty id in list '" + text + "'");
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(cur, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != cur.size()) throw TopologyError("bad node id '" + cur + "'");
    out.insert(static_cast<NodeId>(v));
  }
  if (out.empty()) throw TopologyError("empty id list");
  return out;
}

NetworkGraph load_topology(const std::string& path) {
  NetworkGraph g = NetworkGraph::load_file(path);
  check_reference_degree_profile(g);
  return g;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw TopologyError("cannot write output file: " + out_path);
  out << text;
}

int cmd_validate(const std::string& topo_path) {
  NetworkGraph g = load_topology(topo_path);
  std::cout << "topology OK: " << g.node_count() << " nodes, "
            << g.edges().size() << " edges\n";
  std::cout << "mc:";
  if (g.mc_nodes().empty()) {
    std::cout << " (none)";
  } else {
    for (NodeId v : g.mc_nodes()) std::cout << " " << v;
  }
  std::cout << "\n";
  return kExitOk;
}

int cmd_route(const std::string& topo_path, const std::string& algo_name,
              NodeId source, const std::string& dest_list,
              const std::string& mc_list) {
  NetworkGraph g = load_topology(topo_path);
  if (!mc_list.empty()) g = g.with_mc(parse_id_list(mc_list));

  auto algo = parse_algorithm(algo_name);
  if (!algo) throw TopologyError("unknown algorithm '" + algo_name + "'");
  if (!g.has_node(source))
    throw TopologyError("source " + std::to_string(source) + " not in graph");
  MulticastSession ms;
  ms.source = source;
  ms.dests = parse_id_list(dest_list);
  for (NodeId d : ms.dests) {
    if (!g.has_node(d))
      throw TopologyError("destination " + std::to_string(d) +
                          " not in graph");
  }
  if (ms.dests.count(source))
    throw TopologyError("source cannot be a destination");

  LightForest f = run_algorithm(*algo, g, ms);
  validate_forest(f, g);
  MetricsReport m = metrics(f, g);
  std::cout << serialize_forest(f);
  std::cout << "stress=" << m.stress << " cost=" << format_exact(m.total_cost)
            << " aver_delay=" << format_exact(m.aver_delay)
            << " max_delay=" << format_exact(m.max_delay) << "\n";
  return kExitOk;
}

int cmd_spt_compare(const std::string& topo_path, const std::string& policy_str,
                    const std::string& out_path) {
  NetworkGraph g = load_topology(topo_path);
  McPolicy policy = McPolicy::parse(policy_str);
  if (policy.kind == McPolicy::Kind::kUniformRandom)
    throw TopologyError("spt-compare needs a deterministic mc policy");
  std::set<NodeId> mc_base;
  if (policy.kind == McPolicy::Kind::kExplicitSet) {
    mc_base = policy.explicit_nodes;
    for (NodeId v : mc_base) {
      if (!g.has_node(v))
        throw TopologyError("mc node " + std::to_string(v) + " out of range");
    }
  } else {
    for (NodeId v = 1; v <= g.node_count(); ++v) {
      if (g.degree(v) >= policy.degree_threshold) mc_base.insert(v);
    }
  }
  SptComparison cmp = spt_comparison(g, mc_base);
  write_output(spt_comparison_csv(cmp, topo_path, policy.describe()),
               out_path);
  return kExitOk;
}

enum class SweepKind { kGroupSize, kMcCount };

int cmd_sweep(SweepKind kind, const std::string& config_path, int jobs,
              const std::string& out_override) {
  ExperimentConfig cfg = ExperimentConfig::load_file(config_path);
  if (cfg.topology.empty())
    throw TopologyError("config: missing 'topology' key");
  NetworkGraph g = load_topology(cfg.topology);
  if (jobs < 1) throw TopologyError("--jobs must be >= 1");
  std::vector<SweepRow> rows;
  const char* x_name = nullptr;
  if (kind == SweepKind::kGroupSize) {
    rows = sweep_group_size(cfg, g, jobs);
    x_name = "group_size";
  } else {
    rows = sweep_mc_count(cfg, g, jobs);
    x_name = "mc_count";
  }
  std::string out_path = out_override.empty() ? cfg.out : out_override;
  write_output(sweep_csv(cfg, x_name, rows), out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Light-tree multicast routing in sparse-splitting WDM networks"};
  app.require_subcommand(1);

  std::string topo_path, config_path, out_path;
  std::string algo_name, dest_list, mc_list, policy_str;
  NodeId source = 0;
  int jobs = 1;

  CLI::App* validate =
      app.add_subcommand("validate", "Parse and validate a topology file");
  validate->add_option("topology", topo_path, "topology file")->required();

  CLI::App* route = app.add_subcommand(
      "route", "Run one algorithm on one multicast session and print the "
               "light-forest plus its metrics");
  route->add_option("topology", topo_path, "topology file")->required();
  route->add_option("--algo", algo_name,
                    "algorithm: MIBPro|MIBPro2|R2S|R2A|MO")
      ->required();
  route->add_option("--source", source, "source node id")->required();
  route->add_option("--dests", dest_list, "destination ids, comma separated")
      ->required();
  route->add_option("--mc", mc_list,
                    "MC node ids, comma separated (replaces the file's mc "
                    "line)");

  CLI::App* sptc = app.add_subcommand(
      "spt-compare", "Per-source Dijkstra vs DijkstraPro MIB/stress table");
  sptc->add_option("topology", topo_path, "topology file")->required();
  sptc->add_option("--mc", policy_str,
                   "mc policy: explicit-set[:ids] | degree-threshold[:k]")
      ->required();
  sptc->add_option("--out", out_path, "output CSV path (default stdout)");

  CLI::App* sweep_g = app.add_subcommand(
      "sweep-group", "Sweep over multicast group sizes per the config file");
  sweep_g->add_option("config", config_path, "experiment config file")
      ->required();
  sweep_g->add_option("--jobs", jobs, "max worker threads (default 1)");
  sweep_g->add_option("--out", out_path, "override the config's out path");

  CLI::App* sweep_m = app.add_subcommand(
      "sweep-mc", "Sweep over MC node counts per the config file");
  sweep_m->add_option("config", config_path, "experiment config file")
      ->required();
  sweep_m->add_option("--jobs", jobs, "max worker threads (default 1)");
  sweep_m->add_option("--out", out_path, "override the config's out path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(topo_path);
    if (route->parsed())
      return cmd_route(topo_path, algo_name, source, dest_list, mc_list);
    if (sptc->parsed()) return cmd_spt_compare(topo_path, policy_str, out_path);
    if (sweep_g->parsed())
      return cmd_sweep(SweepKind::kGroupSize, config_path, jobs, out_path);
    if (sweep_m->parsed())
      return cmd_sweep(SweepKind::kMcCount, config_path, jobs, out_path);
  } catch (const mcast::TopologyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const mcast::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
