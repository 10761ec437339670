#include "chainflow/solve_result.hpp"

namespace chainflow {

std::vector<int> ComputeLoads(std::size_t node_count,
                              const std::map<std::size_t, ChainCandidate>& assignment) {
  std::vector<int> loads(node_count, 0);
  for (const auto& [request, chain] : assignment) {
    for (NodeId v : chain.nodes) {
      if (v < node_count) ++loads[v];
    }
  }
  return loads;
}

SolveResult MakeResult(std::size_t node_count, std::map<std::size_t, ChainCandidate> assignment,
                       bool optimal) {
  SolveResult r;
  r.loads = ComputeLoads(node_count, assignment);
  for (const auto& entry : assignment) r.admitted.push_back(entry.first);
  r.objective = r.admitted.size();
  r.assignment = std::move(assignment);
  r.optimal = optimal;
  return r;
}

}  // namespace chainflow
