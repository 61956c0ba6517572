#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcast/baselines.hpp"

namespace mcast {

// SplitMix64 (Steele/Lea/Flood). Chosen for the experiment harness because it
// is tiny, fast, splittable by construction and bit-stable across platforms --
// unlike std::shuffle / std::uniform_int_distribution, which are
// implementation-defined and would break byte-identical CSV re-runs.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) by rejection (no modulo bias).
  std::uint64_t next_below(std::uint64_t bound);

  // `k` distinct elements of `pool`, order-insensitive result (returned
  // sorted); partial Fisher-Yates over a copy.
  std::vector<NodeId> sample(std::vector<NodeId> pool, int k);

 private:
  std::uint64_t state_;
};

// Stream derivation: every (source, session-index) pair owns an independent
// generator, so parallel and serial runs produce identical sessions.
//   stream = mix(mix(seed + GOLDEN*source) + GOLDEN*(index+1))
// where mix is the SplitMix64 output function.
std::uint64_t session_stream_seed(std::uint64_t seed, NodeId source,
                                  int session_index);

struct McPolicy {
  enum class Kind { kExplicitSet, kDegreeThreshold, kUniformRandom };
  Kind kind = Kind::kDegreeThreshold;
  std::set<NodeId> explicit_nodes;  // kExplicitSet
  int degree_threshold = 4;         // kDegreeThreshold

  // "explicit-set:6,10" | "degree-threshold[:k]" | "uniform-random"
  static McPolicy parse(const std::string& text);
  std::string describe() const;
  // The session MC set always includes the source. kUniformRandom is resolved
  // per session by the sweep (it needs a count and the session's generator).
  std::set<NodeId> resolve(const NetworkGraph& g, NodeId source) const;
};

struct ExperimentConfig {
  std::string topology;
  McPolicy mc_policy;
  std::vector<int> group_sizes;
  std::vector<int> mc_counts;  // sweep-mc only
  int sessions_per_source = 100;
  std::uint64_t seed = 1;
  std::vector<AlgorithmId> algorithms;  // default: all five
  std::string out;

  // Simple `key = value` text; keys: topology, seed, sessions_per_source,
  // group_sizes, mc_policy, mc_counts, algorithms, out. '#' comments.
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load_file(const std::string& path);
};

// `sessions_per_source` sessions for each node as source in turn (ascending),
// destinations sampled uniformly without replacement from V \ {source} with
// the (source, index) stream of `seed`.
std::vector<MulticastSession> generate_sessions(const NetworkGraph& g,
                                                int group_size,
                                                int sessions_per_source,
                                                std::uint64_t seed);

struct SptComparisonRow {
  NodeId source = 0;
  int n_dijkstra = 0;
  int s_dijkstra = 0;
  int n_dijkstra_pro = 0;
  int s_dijkstra_pro = 0;
};

struct SptComparison {
  std::vector<SptComparisonRow> rows;  // one per source, ascending
  Rational avg_n_dijkstra{0};
  Rational avg_s_dijkstra{0};
  Rational avg_n_dijkstra_pro{0};
  Rational avg_s_dijkstra_pro{0};
};

// Per-source MIB count (N) and SPT link stress (S) for the classic and the
// Pro tree; one row per node as source, MC set = mc_base + source. `members`
// empty means every node (the reference tables); dests = members minus source.
SptComparison spt_comparison(const NetworkGraph& g,
                             const std::set<NodeId>& mc_base,
                             const std::set<NodeId>& members = {});

std::string spt_comparison_csv(const SptComparison& c,
                               const std::string& topology,
                               const std::string& mc_label);

struct SweepRow {
  int x = 0;  // group size, or MC count
  AlgorithmId algorithm = AlgorithmId::kMibPro;
  Rational mean_stress{0};
  Rational mean_cost{0};
  Rational mean_aver_delay{0};
  Rational mean_max_delay{0};
  long long n = 0;
};

// One row per (group size, algorithm). MC set per session = policy resolution.
// `jobs` caps worker threads; results are reduced in (source, index) order, so
// the output is independent of `jobs`.
std::vector<SweepRow> sweep_group_size(const ExperimentConfig& cfg,
                                       const NetworkGraph& g, int jobs = 1);

// One row per (MC count, algorithm), group size fixed to the single entry of
// cfg.group_sizes; per session the MC set is `count` uniform nodes plus the
// source, drawn from the session stream after its destinations.
std::vector<SweepRow> sweep_mc_count(const ExperimentConfig& cfg,
                                     const NetworkGraph& g, int jobs = 1);

// Header `x,algorithm,mean_stress,mean_cost,mean_aver_delay,mean_max_delay,n`
// preceded by `#`-prefixed config echo lines (seed included).
std::string sweep_csv(const ExperimentConfig& cfg, const char* x_name,
                      const std::vector<SweepRow>& rows);

}  // namespace mcast
