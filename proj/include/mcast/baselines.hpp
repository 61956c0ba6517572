#pragma once

#include <optional>
#include <string>

#include "mcast/forest.hpp"
#include "mcast/mib.hpp"

namespace mcast {

enum class AlgorithmId { kMibPro, kMibPro2, kR2S, kR2A, kMO };

constexpr AlgorithmId kAllAlgorithms[] = {
    AlgorithmId::kMibPro, AlgorithmId::kMibPro2, AlgorithmId::kR2S,
    AlgorithmId::kR2A, AlgorithmId::kMO};

std::string to_string(AlgorithmId id);
std::optional<AlgorithmId> parse_algorithm(const std::string& name);

// DijkstraPro -> prune -> MIBPro cut -> distance-based reconnection.
LightForest mibpro(const NetworkGraph& g, const MulticastSession& ms);

// Same pipeline with the delete-all-branches cut.
LightForest mibpro2(const NetworkGraph& g, const MulticastSession& ms);

// Dijkstra -> prune -> keep the lowest-id child at each MIB node; every
// removed child subtree is rebuilt from per-destination shortest paths on
// fresh wavelengths (merged only where MI-legal). Every destination's delay
// equals its graph shortest-path delay.
LightForest reroute_to_source(const NetworkGraph& g,
                              const MulticastSession& ms);

// Dijkstra -> prune -> lowest-id keep at each MIB node -> plain-greedy
// reconnection of the cut destinations.
LightForest reroute_to_any(const NetworkGraph& g, const MulticastSession& ms);

// Plain-greedy reconnection from {source} alone (constrained
// Takahashi-Matsuyama).
LightForest member_only(const NetworkGraph& g, const MulticastSession& ms);

LightForest run_algorithm(AlgorithmId id, const NetworkGraph& g,
                          const MulticastSession& ms);

}  // namespace mcast
