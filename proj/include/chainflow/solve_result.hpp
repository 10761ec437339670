#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "chainflow/instance.hpp"

namespace chainflow {

/// Admitted requests and their chains, as produced by any online or offline
/// solver. `loads[v]` counts chain positions at v over all assigned chains.
struct SolveResult {
  std::vector<std::size_t> admitted;                 // ascending
  std::map<std::size_t, ChainCandidate> assignment;  // keys == admitted
  std::size_t objective = 0;
  std::vector<int> loads;
  bool optimal = false;
};

/// Per-position loads induced by `assignment` on a graph with `node_count`
/// nodes. Nodes outside the graph are ignored.
std::vector<int> ComputeLoads(std::size_t node_count,
                              const std::map<std::size_t, ChainCandidate>& assignment);

/// Builds a result (admitted, objective, loads) from an assignment.
SolveResult MakeResult(std::size_t node_count, std::map<std::size_t, ChainCandidate> assignment,
                       bool optimal);

}  // namespace chainflow
