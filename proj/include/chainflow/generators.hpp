#pragma once

// Instance generators: the phase-based lower-bound adversary, the set-packing
// and independent-set reductions, and seeded random graph instances.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chainflow/ace.hpp"
#include "chainflow/instance.hpp"
#include "chainflow/solve_result.hpp"

namespace chainflow {

/// One group of identical requests sharing the segment [first_node, last_node]
/// of the line L = (0, ..., ell-1).
struct PhaseGroup {
  NodeId first_node = 0;
  NodeId last_node = 0;
  std::size_t first_request = 0;
  std::size_t request_count = 0;

  std::size_t segment_length() const { return last_node - first_node + 1; }
};

/// Phase i (0 <= i <= log2 ell) has 2^i groups of kappa requests, each group
/// tied to a segment of ell / 2^i nodes.
struct PhaseSchedule {
  std::size_t ell = 0;
  int kappa = 0;
  std::vector<std::vector<PhaseGroup>> phases;

  std::size_t phase_count() const { return phases.size(); }
  std::size_t total_requests() const;
  /// First request index of `phase` and the number of requests in it.
  std::size_t phase_begin(std::size_t phase) const;
  std::size_t phase_size(std::size_t phase) const;
};

struct AdversarialInstance {
  Instance instance;
  PhaseSchedule schedule;
};

/// Explicit-mode instance over ell capacity-kappa nodes. Requires ell a power
/// of two, ell >= 2 and kappa >= log2(ell).
AdversarialInstance MakeAdversarialInstance(std::size_t ell, int kappa);

struct AdversaryOutcome {
  std::size_t stop_phase = 0;
  std::size_t online_admitted = 0;  // admissions in phases 0..stop_phase
  std::size_t offline_value = 0;    // 2^stop_phase * kappa
  double ratio = 0.0;               // offline / online, +inf when online is 0
  std::vector<std::size_t> admitted_per_phase;
  /// sum_i (ell / 2^i) x_i over all phases; never exceeds ell * kappa.
  std::size_t capacity_used = 0;
  /// OFF's solution: every request of the stop phase on its segment.
  SolveResult offline_solution;
};

/// Feeds all phases to `algorithm`, then stops after the phase with the
/// largest OFF/ON ratio (earliest on ties). A deterministic algorithm sees the
/// same prefix whether or not later phases are issued, so this equals an
/// adversary that stops adaptively.
AdversaryOutcome RunAdversary(OnlineAlgorithm& algorithm, std::size_t ell, int kappa);

/// Phase-weighted admissions sum_i (ell / 2^i) x_i.
std::size_t PhaseWeightedAdmissions(const PhaseSchedule& schedule,
                                    const std::vector<std::size_t>& admitted_per_phase);

/// Set packing: one capacity-1 node per universe element (ids 0..U-1), each
/// set padded to exactly k nodes with fresh auxiliary nodes, one chain per
/// set, and |sets| requests that may each use any chain. Requires k >= 3 and
/// every set to have <= k distinct elements below `universe_size`.
Instance SetPackingToInstance(std::size_t universe_size, const std::vector<std::vector<NodeId>>& sets,
                              std::size_t k);

/// Independent set: one capacity-1 node per edge of `graph` (edge order),
/// chain c_v = incident edge nodes padded with ell - deg(v) auxiliary nodes,
/// one request per vertex that may use any chain. Requires ell >= 3 and
/// max degree <= ell.
Instance IndependentSetToInstance(const NetworkGraph& graph, std::size_t ell);

struct RandomInstanceParams {
  std::size_t node_count = 10;
  std::size_t chain_length = 2;
  std::size_t instances_per_function = 2;
  std::size_t request_count = 10;
  int capacity_min = 1;
  int capacity_max = 3;
  RouteConstraint constraint = RouteConstraint::MaxLength(6);
  double edge_probability = 0.2;
};

/// Connected random graph (random spanning tree plus independent extra edges),
/// hosts of each function type sampled uniformly without replacement, request
/// endpoints uniform. Identical (params, seed) give identical instances.
Instance MakeRandomInstance(const RandomInstanceParams& params, std::uint64_t seed);

}  // namespace chainflow
