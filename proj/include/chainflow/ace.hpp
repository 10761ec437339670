#pragma once

// Online admission with exponential node costs. Each node v carries the cost
//
//   w_v = kappa(v) * (mu^{lambda_v} - 1),   lambda_v = used(v) / kappa(v),
//
// and a request is admitted on a candidate chain c iff
// sum_{v in c} w_v / kappa(v) <= |c|. The default base is mu = 2l + 2 with l
// the longest chain of the instance; logarithms are base 2.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chainflow/instance.hpp"
#include "chainflow/solve_result.hpp"

namespace chainflow {

struct AceParams {
  double mu = 4.0;
  std::size_t ell = 1;
  /// False when mu was overridden away from 2l + 2.
  bool standard = true;

  static AceParams ForChainLength(std::size_t ell);
  /// Experimental override of the cost base; flagged non-standard.
  static AceParams WithMu(std::size_t ell, double mu);

  /// 1 + 2 log2(mu): the guaranteed OFF/ON factor.
  double competitive_bound() const;
};

/// Standard parameters for an instance (l = Instance::max_chain_length()).
AceParams DefaultParams(const Instance& instance);

/// min_v kappa(v) >= log2(mu), the capacity assumption behind the guarantee.
bool MinCapacityAssumptionHolds(const NetworkGraph& graph, const AceParams& params);

struct OnlineState {
  explicit OnlineState(std::size_t node_count) : used(node_count, 0) {}

  std::vector<int> used;  // chain positions hosted per node
  std::vector<std::size_t> admitted;
  std::map<std::size_t, ChainCandidate> assignment;
  std::size_t step = 0;  // next request index
};

enum class DecisionReason {
  kAdmitted,
  kNoCandidates,
  kAllChainsTooExpensive,
  /// Some chain met the cost condition but every such chain lacked residual
  /// capacity. Cannot happen while MinCapacityAssumptionHolds and chains do
  /// not repeat nodes.
  kCapacityGuard,
};

std::string_view DecisionReasonName(DecisionReason reason);

struct Decision {
  bool admitted = false;
  std::optional<ChainCandidate> chain;
  /// Admission-condition left-hand side of `chain`; on a rejection, the
  /// cheapest candidate's. Absent when there were no candidates.
  std::optional<double> cost;
  DecisionReason reason = DecisionReason::kNoCandidates;
};

/// Additive slack on the admission threshold (ties admit).
inline constexpr double kAdmissionEpsilon = 1e-9;

double RelativeLoad(const OnlineState& state, const NetworkGraph& graph, NodeId v);
double NodeWeight(const OnlineState& state, const NetworkGraph& graph, const AceParams& params,
                  NodeId v);
/// sum over chain positions of (mu^{lambda_v} - 1).
double ChainCost(const OnlineState& state, const NetworkGraph& graph, const AceParams& params,
                 const ChainCandidate& chain);
/// sum_v w_v over all nodes.
double TotalWeight(const OnlineState& state, const NetworkGraph& graph, const AceParams& params);
/// Same quantity computed from a load vector.
double TotalWeight(std::span<const int> loads, const NetworkGraph& graph, const AceParams& params);

/// True iff every position of `chain` has a free capacity unit, counting
/// repeated nodes once per position.
bool HasResidualCapacity(std::span<const int> used, const NetworkGraph& graph,
                         const ChainCandidate& chain);

/// Processes request `state.step`: admits it on the cheapest candidate whose
/// cost is <= threshold + kAdmissionEpsilon and that has residual capacity
/// (earliest candidate on ties). The threshold is the candidates' own chain
/// length. On rejection the state only advances its step counter.
Decision AceStep(OnlineState& state, const Instance& instance, const AceParams& params,
                 std::span<const ChainCandidate> candidates);

struct TraceRecord {
  std::size_t index = 0;
  Decision decision;
  double total_weight = 0.0;  // sum_v w_v after the step
  std::size_t admitted_count = 0;
};

struct AceRun {
  SolveResult result;
  std::vector<TraceRecord> trace;
  std::vector<std::string> warnings;
  AceParams params;
};

AceRun RunAce(const Instance& instance, const AceParams& params);
AceRun RunAce(const Instance& instance, const AceParams& params, const CandidateTable& candidates);
inline AceRun RunAce(const Instance& instance) { return RunAce(instance, DefaultParams(instance)); }

/// First fit: admit on the first candidate with residual capacity.
SolveResult RunGreedy(const Instance& instance);
SolveResult RunGreedy(const Instance& instance, const CandidateTable& candidates);

/// JSON lines, one record per request:
/// {"index","decision","chain","cost","total_weight","admitted_count"}.
std::string TraceToJsonLines(const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> TraceFromJsonLines(std::string_view text);

/// Sequential admission procedure driven request by request, e.g. by the
/// lower-bound adversary.
class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;

  virtual std::string_view name() const = 0;
  /// Starts a fresh run on `instance`, which must outlive the run.
  virtual void Reset(const Instance& instance) = 0;
  /// Offers the next request; returns whether it was admitted.
  virtual bool Offer(std::span<const ChainCandidate> candidates) = 0;
};

class AceAlgorithm : public OnlineAlgorithm {
 public:
  AceAlgorithm() = default;
  /// Fixed mu instead of 2l + 2 for each instance.
  explicit AceAlgorithm(double mu_override) : mu_override_(mu_override) {}

  std::string_view name() const override { return "ace"; }
  void Reset(const Instance& instance) override;
  bool Offer(std::span<const ChainCandidate> candidates) override;

  const OnlineState& state() const { return *state_; }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  const AceParams& params() const { return params_; }

 private:
  std::optional<double> mu_override_;
  const Instance* instance_ = nullptr;
  AceParams params_;
  std::optional<OnlineState> state_;
  std::vector<TraceRecord> trace_;
};

class GreedyAlgorithm : public OnlineAlgorithm {
 public:
  std::string_view name() const override { return "greedy"; }
  void Reset(const Instance& instance) override;
  bool Offer(std::span<const ChainCandidate> candidates) override;

  const OnlineState& state() const { return *state_; }

 private:
  const Instance* instance_ = nullptr;
  std::optional<OnlineState> state_;
};

}  // namespace chainflow
