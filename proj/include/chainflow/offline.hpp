#pragma once

// Exact offline solvers for the maximum-admission 0-1 program:
//
//   maximize   sum_i x_i
//   subject to x_i - sum_c x_{c,i} = 0            (each admitted request on one chain)
//              x_{c,i} = 0 for requests outside S_c
//              x_c <= x_v                          for v in c
//              sum_{c containing v} x_c >= x_v
//              sum_i sum_{c containing v} x_{c,i} <= kappa(v) x_v
//
// solved by exhaustive enumeration (the oracle) or branch and bound.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chainflow/instance.hpp"
#include "chainflow/solve_result.hpp"

namespace chainflow {

struct Violation {
  /// One of "assignment", "candidate_set", "capacity", "objective", "loads",
  /// "index".
  std::string constraint;
  std::optional<std::size_t> request;
  std::optional<NodeId> node;
  std::string message;
};

struct VerifyReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
  std::string Summary() const;
};

/// Checks `result` against the program's constraints. Violations are data,
/// never exceptions.
/// Candidate membership is checked directly (host sets and walk length), so
/// no chain enumeration is needed.
VerifyReport VerifySolution(const Instance& instance, const SolveResult& result);

/// Whether `chain` belongs to the candidate set of `request`.
bool IsCandidate(const Instance& instance, const DistanceTable& dist, const Request& request,
                 const ChainCandidate& chain);

inline constexpr std::uint64_t kDefaultSearchSpaceCap = 10'000'000;

/// Exhaustive search over every admit/reject-and-chain combination. Among
/// maximum-cardinality solutions it returns the lexicographically smallest
/// admitted index set, then the lexicographically smallest sequence of
/// candidate positions. Throws Error(kSearchSpaceTooLarge) when
/// prod_i (|candidates_i| + 1) exceeds `cap`.
SolveResult BruteForce(const Instance& instance, std::uint64_t cap = kDefaultSearchSpaceCap);
SolveResult BruteForce(const Instance& instance, const CandidateTable& candidates,
                       std::uint64_t cap = kDefaultSearchSpaceCap);

struct BranchAndBoundOptions {
  /// Search nodes before giving up; the best solution found so far is then
  /// returned with optimal = false.
  std::uint64_t node_budget = 200'000'000;
};

struct BranchAndBoundStats {
  std::uint64_t nodes = 0;
  bool budget_exhausted = false;
};

/// Depth-first branch and bound. Requests are branched in ascending order of
/// candidate-set size; a node is pruned when admitted + remaining requests
/// with candidates cannot beat the incumbent (seeded by first fit). Requests
/// with identical candidate lists are explored up to permutation only.
SolveResult BranchAndBound(const Instance& instance, const BranchAndBoundOptions& options = {},
                           BranchAndBoundStats* stats = nullptr);
SolveResult BranchAndBound(const Instance& instance, const CandidateTable& candidates,
                           const BranchAndBoundOptions& options = {},
                           BranchAndBoundStats* stats = nullptr);

/// The 0-1 program in CPLEX LP format. Chains are the distinct chains of all
/// candidate sets, in lexicographic order (c0, c1, ...). Variables: x_<i>,
/// x_c<k>, x_c<k>_r<i> (only for i in S_c), x_v<v>. Rows: assign_r<i>,
/// use_c<k>_v<v>, cover_v<v>, cap_v<v>.
std::string ExportLp(const Instance& instance, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace chainflow
