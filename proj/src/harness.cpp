#include "mcast/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace mcast {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

long long parse_int(const std::string& tok, const std::string& what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw TopologyError("bad " + what + " '" + tok + "'");
  }
}

// "2,3,4" or "2-13" (elements may mix: "1,4-6,9").
std::vector<int> parse_int_list(const std::string& text,
                                const std::string& what) {
  std::vector<int> out;
  for (const std::string& item : split(text, ',')) {
    if (item.empty()) throw TopologyError("empty element in " + what);
    auto dash = item.find('-', 1);  // allow leading minus to fail as int
    if (dash != std::string::npos) {
      long long a = parse_int(item.substr(0, dash), what);
      long long b = parse_int(item.substr(dash + 1), what);
      if (a > b) throw TopologyError("descending range in " + what);
      for (long long v = a; v <= b; ++v) out.push_back(static_cast<int>(v));
    } else {
      out.push_back(static_cast<int>(parse_int(item, what)));
    }
  }
  if (out.empty()) throw TopologyError(what + " is empty");
  return out;
}

}  // namespace

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
  if (bound == 0) throw InvariantError("next_below: zero bound");
  // Rejection below 2^64 mod bound removes modulo bias.
  std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t r = next();
  while (r < threshold) r = next();
  return r % bound;
}

std::vector<NodeId> SplitMix64::sample(std::vector<NodeId> pool, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > pool.size())
    throw InvariantError("sample: k out of range");
  for (int i = 0; i < k; ++i) {
    std::size_t j =
        i + static_cast<std::size_t>(next_below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::uint64_t session_stream_seed(std::uint64_t seed, NodeId source,
                                  int session_index) {
  std::uint64_t a = mix(seed + kGolden * static_cast<std::uint64_t>(source));
  return mix(a + kGolden * static_cast<std::uint64_t>(session_index + 1));
}

McPolicy McPolicy::parse(const std::string& text) {
  McPolicy p;
  std::string name = text;
  std::string arg;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    name = text.substr(0, colon);
    arg = trim(text.substr(colon + 1));
  }
  name = trim(name);
  if (name == "uniform-random") {
    if (colon != std::string::npos)
      throw TopologyError("mc policy uniform-random takes no argument");
    p.kind = Kind::kUniformRandom;
  } else if (name == "degree-threshold") {
    p.kind = Kind::kDegreeThreshold;
    if (colon != std::string::npos) {
      long long k = parse_int(arg, "degree threshold");
      if (k < 0) throw TopologyError("degree threshold must be >= 0");
      p.degree_threshold = static_cast<int>(k);
    }
  } else if (name == "explicit-set") {
    p.kind = Kind::kExplicitSet;
    if (colon != std::string::npos && !arg.empty()) {
      for (int v : parse_int_list(arg, "mc node list"))
        p.explicit_nodes.insert(v);
    }
  } else {
    throw TopologyError("unknown mc policy '" + text + "'");
  }
  return p;
}

std::string McPolicy::describe() const {
  switch (kind) {
    case Kind::kUniformRandom:
      return "uniform-random";
    case Kind::kDegreeThreshold:
      return "degree-threshold:" + std::to_string(degree_threshold);
    case Kind::kExplicitSet: {
      if (explicit_nodes.empty()) return "explicit-set";
      std::string out = "explicit-set:";
      bool first = true;
      for (NodeId v : explicit_nodes) {
        if (!first) out += ",";
        out += std::to_string(v);
        first = false;
      }
      return out;
    }
  }
  throw InvariantError("describe: unknown policy kind");
}

std::set<NodeId> McPolicy::resolve(const NetworkGraph& g,
                                   NodeId source) const {
  std::set<NodeId> mc;
  switch (kind) {
    case Kind::kExplicitSet:
      for (NodeId v : explicit_nodes) {
        if (!g.has_node(v))
          throw TopologyError("mc node " + std::to_string(v) +
                              " out of range");
        mc.insert(v);
      }
      break;
    case Kind::kDegreeThreshold:
      for (NodeId v = 1; v <= g.node_count(); ++v) {
        if (g.degree(v) >= degree_threshold) mc.insert(v);
      }
      break;
    case Kind::kUniformRandom:
      throw InvariantError(
          "uniform-random mc placement is drawn per session by the sweep");
  }
  mc.insert(source);
  return mc;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos)
      throw TopologyError("config line " + std::to_string(line_no) +
                          ": expected 'key = value'");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    try {
      if (key == "topology") {
        cfg.topology = value;
      } else if (key == "seed") {
        std::size_t pos = 0;
        cfg.seed = std::stoull(value, &pos);
        if (pos != value.size()) throw TopologyError("bad seed '" + value + "'");
      } else if (key == "sessions_per_source") {
        long long n = parse_int(value, "sessions_per_source");
        if (n < 1) throw TopologyError("sessions_per_source must be >= 1");
        cfg.sessions_per_source = static_cast<int>(n);
      } else if (key == "group_sizes") {
        cfg.group_sizes = parse_int_list(value, "group_sizes");
      } else if (key == "mc_counts") {
        cfg.mc_counts = parse_int_list(value, "mc_counts");
      } else if (key == "mc_policy") {
        cfg.mc_policy = McPolicy::parse(value);
      } else if (key == "algorithms") {
        cfg.algorithms.clear();
        for (const std::string& name : split(value, ',')) {
          auto id = parse_algorithm(name);
          if (!id) throw TopologyError("unknown algorithm '" + name + "'");
          cfg.algorithms.push_back(*id);
        }
        if (cfg.algorithms.empty())
          throw TopologyError("algorithms list is empty");
      } else if (key == "out") {
        cfg.out = value;
      } else {
        throw TopologyError("unknown key '" + key + "'");
      }
    } catch (const TopologyError& e) {
      throw TopologyError("config line " + std::to_string(line_no) + ": " +
                          e.what());
    } catch (const std::exception& e) {
      throw TopologyError("config line " + std::to_string(line_no) + ": bad '" +
                          key + "' value");
    }
  }
  if (cfg.algorithms.empty())
    cfg.algorithms.assign(std::begin(kAllAlgorithms),
                          std::end(kAllAlgorithms));
  return cfg;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::vector<MulticastSession> generate_sessions(const NetworkGraph& g,
                                                int group_size,
                                                int sessions_per_source,
                                                std::uint64_t seed) {
  if (group_size < 1 || group_size > g.node_count() - 1)
    throw TopologyError("group size " + std::to_string(group_size) +
                        " out of range 1.." +
                        std::to_string(g.node_count() - 1));
  if (sessions_per_source < 1)
    throw TopologyError("sessions_per_source must be >= 1");
  std::vector<MulticastSession> out;
  out.reserve(static_cast<std::size_t>(g.node_count()) * sessions_per_source);
  for (NodeId s = 1; s <= g.node_count(); ++s) {
    std::vector<NodeId> pool;
    for (NodeId v = 1; v <= g.node_count(); ++v) {
      if (v != s) pool.push_back(v);
    }
    for (int i = 0; i < sessions_per_source; ++i) {
      SplitMix64 rng(session_stream_seed(seed, s, i));
      std::vector<NodeId> dests = rng.sample(pool, group_size);
      out.push_back({s, std::set<NodeId>(dests.begin(), dests.end())});
    }
  }
  return out;
}

SptComparison spt_comparison(const NetworkGraph& g,
                             const std::set<NodeId>& mc_base,
                             const std::set<NodeId>& members) {
  SptComparison cmp;
  long long sum_nd = 0, sum_sd = 0, sum_np = 0, sum_sp = 0;
  for (NodeId s = 1; s <= g.node_count(); ++s) {
    std::set<NodeId> mc = mc_base;
    mc.insert(s);
    NetworkGraph gg = g.with_mc(std::move(mc));
    std::set<NodeId> dests;
    if (members.empty()) {
      for (NodeId v = 1; v <= g.node_count(); ++v) {
        if (v != s) dests.insert(v);
      }
    } else {
      dests = members;
      dests.erase(s);
    }
    SptTree plain = dijkstra_spt(gg, s);
    SptTree pro = dijkstra_pro_spt(gg, s, dests);
    if (plain.dist != pro.dist)
      throw InvariantError("spt_comparison: DijkstraPro changed a distance");
    RootedTree p1 = prune_spt(plain.tree, dests);
    RootedTree p2 = prune_spt(pro.tree, dests);
    SptComparisonRow row;
    row.source = s;
    row.n_dijkstra = static_cast<int>(mib_census(gg, p1).size());
    row.s_dijkstra = spt_link_stress(gg, p1);
    row.n_dijkstra_pro = static_cast<int>(mib_census(gg, p2).size());
    row.s_dijkstra_pro = spt_link_stress(gg, p2);
    sum_nd += row.n_dijkstra;
    sum_sd += row.s_dijkstra;
    sum_np += row.n_dijkstra_pro;
    sum_sp += row.s_dijkstra_pro;
    cmp.rows.push_back(row);
  }
  Rational n(g.node_count());
  cmp.avg_n_dijkstra = Rational(sum_nd) / n;
  cmp.avg_s_dijkstra = Rational(sum_sd) / n;
  cmp.avg_n_dijkstra_pro = Rational(sum_np) / n;
  cmp.avg_s_dijkstra_pro = Rational(sum_sp) / n;
  return cmp;
}

std::string spt_comparison_csv(const SptComparison& c,
                               const std::string& topology,
                               const std::string& mc_label) {
  std::ostringstream out;
  out << "# topology = " << topology << "\n";
  out << "# mc = " << mc_label << "\n";
  out << "source,n_dijkstra,s_dijkstra,n_dijkstra_pro,s_dijkstra_pro\n";
  for (const SptComparisonRow& r : c.rows) {
    out << r.source << "," << r.n_dijkstra << "," << r.s_dijkstra << ","
        << r.n_dijkstra_pro << "," << r.s_dijkstra_pro << "\n";
  }
  out << "average," << format_decimal(c.avg_n_dijkstra, 6) << ","
      << format_decimal(c.avg_s_dijkstra, 6) << ","
      << format_decimal(c.avg_n_dijkstra_pro, 6) << ","
      << format_decimal(c.avg_s_dijkstra_pro, 6) << "\n";
  return out.str();
}

namespace {

struct SessionItem {
  MulticastSession ms;
  std::set<NodeId> mc;
};

// Destinations first, then (for uniform-random placement) the MC draw, from
// one (source, index) stream -- parallel/serial runs see identical items.
std::vector<SessionItem> build_items(const NetworkGraph& g,
                                     const ExperimentConfig& cfg,
                                     int group_size,
                                     std::optional<int> mc_count) {
  if (group_size < 1 || group_size > g.node_count() - 1)
    throw TopologyError("group size " + std::to_string(group_size) +
                        " out of range 1.." +
                        std::to_string(g.node_count() - 1));
  if (cfg.sessions_per_source < 1)
    throw TopologyError("sessions_per_source must be >= 1");
  if (mc_count && (*mc_count < 0 || *mc_count > g.node_count()))
    throw TopologyError("mc count " + std::to_string(*mc_count) +
                        " out of range 0.." + std::to_string(g.node_count()));
  std::vector<NodeId> all_nodes;
  for (NodeId v = 1; v <= g.node_count(); ++v) all_nodes.push_back(v);

  std::vector<SessionItem> items;
  items.reserve(static_cast<std::size_t>(g.node_count()) *
                cfg.sessions_per_source);
  for (NodeId s = 1; s <= g.node_count(); ++s) {
    std::vector<NodeId> pool;
    for (NodeId v : all_nodes) {
      if (v != s) pool.push_back(v);
    }
    std::set<NodeId> fixed_mc;
    if (!mc_count) fixed_mc = cfg.mc_policy.resolve(g, s);
    for (int i = 0; i < cfg.sessions_per_source; ++i) {
      SplitMix64 rng(session_stream_seed(cfg.seed, s, i));
      std::vector<NodeId> dests = rng.sample(pool, group_size);
      SessionItem item;
      item.ms.source = s;
      item.ms.dests.insert(dests.begin(), dests.end());
      if (mc_count) {
        std::vector<NodeId> mc = rng.sample(all_nodes, *mc_count);
        item.mc.insert(mc.begin(), mc.end());
        item.mc.insert(s);
      } else {
        item.mc = fixed_mc;
      }
      items.push_back(std::move(item));
    }
  }
  return items;
}

std::vector<std::vector<MetricsReport>> evaluate(
    const NetworkGraph& g, const std::vector<SessionItem>& items,
    const std::vector<AlgorithmId>& algos, int jobs) {
  std::vector<std::vector<MetricsReport>> results(
      items.size(), std::vector<MetricsReport>(algos.size()));
  auto work_one = [&](std::size_t i) {
    NetworkGraph gg = g.with_mc(items[i].mc);
    for (std::size_t a = 0; a < algos.size(); ++a) {
      LightForest f = run_algorithm(algos[a], gg, items[i].ms);
      results[i][a] = metrics(f, gg);
    }
  };
  int workers = std::max(1, jobs);
  workers = static_cast<int>(
      std::min<std::size_t>(workers, std::max<std::size_t>(items.size(), 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) work_one(i);
    return results;
  }
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> threads;
  for (int t = 0; t < workers; ++t) {
    threads.emplace_back([&] {
      while (true) {
        std::size_t i = cursor.fetch_add(1);
        if (i >= items.size()) break;
        try {
          work_one(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          break;
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  if (error) std::rethrow_exception(error);
  return results;
}

std::vector<SweepRow> reduce_point(
    int x, const std::vector<AlgorithmId>& algos,
    const std::vector<std::vector<MetricsReport>>& results) {
  std::vector<SweepRow> rows;
  long long n = static_cast<long long>(results.size());
  for (std::size_t a = 0; a < algos.size(); ++a) {
    SweepRow row;
    row.x = x;
    row.algorithm = algos[a];
    row.n = n;
    // Ordered reduction over (source, session index): results are indexed by
    // generation order, so the fold is independent of worker scheduling.
    for (std::size_t i = 0; i < results.size(); ++i) {
      const MetricsReport& m = results[i][a];
      row.mean_stress += Rational(m.stress);
      row.mean_cost += m.total_cost;
      row.mean_aver_delay += m.aver_delay;
      row.mean_max_delay += m.max_delay;
    }
    row.mean_stress /= Rational(n);
    row.mean_cost /= Rational(n);
    row.mean_aver_delay /= Rational(n);
    row.mean_max_delay /= Rational(n);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> sweep_group_size(const ExperimentConfig& cfg,
                                       const NetworkGraph& g, int jobs) {
  if (cfg.group_sizes.empty())
    throw TopologyError("sweep-group: config needs group_sizes");
  std::optional<int> mc_count;
  if (cfg.mc_policy.kind == McPolicy::Kind::kUniformRandom) {
    if (cfg.mc_counts.size() != 1)
      throw TopologyError(
          "sweep-group with uniform-random mc needs exactly one mc_counts "
          "entry");
    mc_count = cfg.mc_counts.front();
  }
  std::vector<SweepRow> rows;
  for (int gs : cfg.group_sizes) {
    auto items = build_items(g, cfg, gs, mc_count);
    auto results = evaluate(g, items, cfg.algorithms, jobs);
    for (SweepRow& r : reduce_point(gs, cfg.algorithms, results))
      rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SweepRow> sweep_mc_count(const ExperimentConfig& cfg,
                                     const NetworkGraph& g, int jobs) {
  if (cfg.group_sizes.size() != 1)
    throw TopologyError("sweep-mc: config needs exactly one group_sizes entry");
  if (cfg.mc_counts.empty())
    throw TopologyError("sweep-mc: config needs mc_counts");
  if (cfg.mc_policy.kind != McPolicy::Kind::kUniformRandom)
    throw TopologyError("sweep-mc: config needs mc_policy = uniform-random");
  int gs = cfg.group_sizes.front();
  std::vector<SweepRow> rows;
  for (int count : cfg.mc_counts) {
    auto items = build_items(g, cfg, gs, count);
    auto results = evaluate(g, items, cfg.algorithms, jobs);
    for (SweepRow& r : reduce_point(count, cfg.algorithms, results))
      rows.push_back(std::move(r));
  }
  return rows;
}

std::string sweep_csv(const ExperimentConfig& cfg, const char* x_name,
                      const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  auto join_ints = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(v[i]);
    }
    return s;
  };
  out << "# x = " << x_name << "\n";
  out << "# topology = " << cfg.topology << "\n";
  out << "# mc_policy = " << cfg.mc_policy.describe() << "\n";
  if (!cfg.group_sizes.empty())
    out << "# group_sizes = " << join_ints(cfg.group_sizes) << "\n";
  if (!cfg.mc_counts.empty())
    out << "# mc_counts = " << join_ints(cfg.mc_counts) << "\n";
  out << "# sessions_per_source = " << cfg.sessions_per_source << "\n";
  out << "# seed = " << cfg.seed << "\n";
  out << "# algorithms = ";
  for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
    if (i) out << ",";
    out << to_string(cfg.algorithms[i]);
  }
  out << "\n";
  out << "x,algorithm,mean_stress,mean_cost,mean_aver_delay,mean_max_delay,n\n";
  for (const SweepRow& r : rows) {
    out << r.x << "," << to_string(r.algorithm) << ","
        << format_decimal(r.mean_stress, 6) << ","
        << format_decimal(r.mean_cost, 6) << ","
        << format_decimal(r.mean_aver_delay, 6) << ","
        << format_decimal(r.mean_max_delay, 6) << "," << r.n << "\n";
  }
  return out.str();
}

}  // namespace mcast
