#include "chainflow/ace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>
#include <sstream>

#include "chainflow/error.hpp"

namespace chainflow {

AceParams AceParams::ForChainLength(std::size_t ell) {
  if (ell == 0) throw Error(ErrorCode::kInvalidParameter, "chain length must be >= 1", "ell");
  return {2.0 * static_cast<double>(ell) + 2.0, ell, true};
}

AceParams AceParams::WithMu(std::size_t ell, double mu) {
  if (ell == 0) throw Error(ErrorCode::kInvalidParameter, "chain length must be >= 1", "ell");
  if (!(mu > 1.0) || !std::isfinite(mu)) {
    throw Error(ErrorCode::kInvalidParameter, "mu must be a finite number > 1", "mu");
  }
  return {mu, ell, mu == 2.0 * static_cast<double>(ell) + 2.0};
}

double AceParams::competitive_bound() const { return 1.0 + 2.0 * std::log2(mu); }

AceParams DefaultParams(const Instance& instance) {
  return AceParams::ForChainLength(std::max<std::size_t>(1, instance.max_chain_length()));
}

bool MinCapacityAssumptionHolds(const NetworkGraph& graph, const AceParams& params) {
  const double need = std::log2(params.mu);
  for (int c : graph.capacities()) {
    if (c < need) return false;
  }
  return true;
}

std::string_view DecisionReasonName(DecisionReason reason) {
  switch (reason) {
    case DecisionReason::kAdmitted:
      return "admitted";
    case DecisionReason::kNoCandidates:
      return "no_candidates";
    case DecisionReason::kAllChainsTooExpensive:
      return "all_chains_too_expensive";
    case DecisionReason::kCapacityGuard:
      return "capacity_guard";
  }
  return "unknown";
}

namespace {

DecisionReason ReasonFromName(std::string_view name) {
  for (auto r : {DecisionReason::kAdmitted, DecisionReason::kNoCandidates,
                 DecisionReason::kAllChainsTooExpensive, DecisionReason::kCapacityGuard}) {
    if (DecisionReasonName(r) == name) return r;
  }
  throw Error(ErrorCode::kParse, "unknown decision \"" + std::string(name) + "\"", "decision");
}

// mu^{used/kappa} - 1
double UnitCost(int used, int kappa, double mu) {
  return std::pow(mu, static_cast<double>(used) / kappa) - 1.0;
}

void Admit(OnlineState& state, std::size_t index, const ChainCandidate& chain) {
  for (NodeId v : chain.nodes) ++state.used[v];
  state.admitted.push_back(index);
  state.assignment.emplace(index, chain);
}

}  // namespace

double RelativeLoad(const OnlineState& state, const NetworkGraph& graph, NodeId v) {
  return static_cast<double>(state.used[v]) / graph.capacity(v);
}

double NodeWeight(const OnlineState& state, const NetworkGraph& graph, const AceParams& params,
                  NodeId v) {
  return graph.capacity(v) * UnitCost(state.used[v], graph.capacity(v), params.mu);
}

double ChainCost(const OnlineState& state, const NetworkGraph& graph, const AceParams& params,
                 const ChainCandidate& chain) {
  double cost = 0.0;
  for (NodeId v : chain.nodes) cost += UnitCost(state.used[v], graph.capacity(v), params.mu);
  return cost;
}

double TotalWeight(std::span<const int> loads, const NetworkGraph& graph, const AceParams& params) {
  double total = 0.0;
  for (std::size_t v = 0; v < loads.size(); ++v) {
    if (loads[v] == 0) continue;
    const int kappa = graph.capacity(static_cast<NodeId>(v));
    total += kappa * UnitCost(loads[v], kappa, params.mu);
  }
  return total;
}

double TotalWeight(const OnlineState& state, const NetworkGraph& graph, const AceParams& params) {
  return TotalWeight(state.used, graph, params);
}

bool HasResidualCapacity(std::span<const int> used, const NetworkGraph& graph,
                         const ChainCandidate& chain) {
  for (std::size_t i = 0; i < chain.nodes.size(); ++i) {
    const NodeId v = chain.nodes[i];
    int demand = 0;
    for (NodeId w : chain.nodes) demand += (w == v);
    if (used[v] + demand > graph.capacity(v)) return false;
  }
  return true;
}

Decision AceStep(OnlineState& state, const Instance& instance, const AceParams& params,
                 std::span<const ChainCandidate> candidates) {
  const std::size_t index = state.step++;
  Decision d;
  if (candidates.empty()) {
    d.reason = DecisionReason::kNoCandidates;
    return d;
  }
  const NetworkGraph& graph = instance.graph();
  bool any_cheap = false;
  const ChainCandidate* best = nullptr;
  double best_cost = 0.0;
  double min_cost = std::numeric_limits<double>::infinity();
  for (const ChainCandidate& c : candidates) {
    const double cost = ChainCost(state, graph, params, c);
    min_cost = std::min(min_cost, cost);
    if (cost > static_cast<double>(c.size()) + kAdmissionEpsilon) continue;
    any_cheap = true;
    if (!HasResidualCapacity(state.used, graph, c)) continue;
    if (best == nullptr || cost < best_cost) {
      best = &c;
      best_cost = cost;
    }
  }
  if (best == nullptr) {
    d.reason = any_cheap ? DecisionReason::kCapacityGuard : DecisionReason::kAllChainsTooExpensive;
    d.cost = min_cost;
    return d;
  }
  Admit(state, index, *best);
  d.admitted = true;
  d.chain = *best;
  d.cost = best_cost;
  d.reason = DecisionReason::kAdmitted;
  return d;
}

AceRun RunAce(const Instance& instance, const AceParams& params) {
  return RunAce(instance, params, BuildCandidateTable(instance));
}

AceRun RunAce(const Instance& instance, const AceParams& params, const CandidateTable& candidates) {
  AceRun run;
  run.params = params;
  const NetworkGraph& graph = instance.graph();
  if (!MinCapacityAssumptionHolds(graph, params)) {
    std::ostringstream msg;
    msg << "min capacity is below log2(mu) = " << std::log2(params.mu)
        << "; capacity is then enforced by the residual-capacity guard only";
    run.warnings.push_back(msg.str());
  }
  if (!params.standard) run.warnings.push_back("non-standard mu = " + std::to_string(params.mu));

  OnlineState state(graph.node_count());
  run.trace.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    TraceRecord rec;
    rec.index = i;
    rec.decision = AceStep(state, instance, params, candidates[i]);
    rec.total_weight = TotalWeight(state, graph, params);
    rec.admitted_count = state.admitted.size();
    run.trace.push_back(std::move(rec));
  }
  run.result = MakeResult(graph.node_count(), std::move(state.assignment), false);
  return run;
}

SolveResult RunGreedy(const Instance& instance) { return RunGreedy(instance, BuildCandidateTable(instance)); }

SolveResult RunGreedy(const Instance& instance, const CandidateTable& candidates) {
  GreedyAlgorithm greedy;
  greedy.Reset(instance);
  for (const auto& cands : candidates) greedy.Offer(cands);
  return MakeResult(instance.graph().node_count(), greedy.state().assignment, false);
}

std::string TraceToJsonLines(const std::vector<TraceRecord>& trace) {
  std::string out;
  for (const TraceRecord& rec : trace) {
    nlohmann::ordered_json j;
    j["index"] = rec.index;
    j["decision"] = DecisionReasonName(rec.decision.reason);
    j["chain"] = rec.decision.chain ? nlohmann::ordered_json(rec.decision.chain->nodes) : nullptr;
    j["cost"] = rec.decision.cost ? nlohmann::ordered_json(*rec.decision.cost) : nullptr;
    j["total_weight"] = rec.total_weight;
    j["admitted_count"] = rec.admitted_count;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<TraceRecord> TraceFromJsonLines(std::string_view text) {
  std::vector<TraceRecord> trace;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      TraceRecord rec;
      rec.index = j.at("index").get<std::size_t>();
      rec.decision.reason = ReasonFromName(j.at("decision").get<std::string>());
      rec.decision.admitted = rec.decision.reason == DecisionReason::kAdmitted;
      if (!j.at("chain").is_null()) rec.decision.chain = ChainCandidate{j["chain"].get<std::vector<NodeId>>()};
      if (!j.at("cost").is_null()) rec.decision.cost = j["cost"].get<double>();
      rec.total_weight = j.at("total_weight").get<double>();
      rec.admitted_count = j.at("admitted_count").get<std::size_t>();
      trace.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, e.what(), where);
    }
  }
  return trace;
}

void AceAlgorithm::Reset(const Instance& instance) {
  instance_ = &instance;
  const std::size_t ell = std::max<std::size_t>(1, instance.max_chain_length());
  params_ = mu_override_ ? AceParams::WithMu(ell, *mu_override_) : AceParams::ForChainLength(ell);
  state_.emplace(instance.graph().node_count());
  trace_.clear();
}

bool AceAlgorithm::Offer(std::span<const ChainCandidate> candidates) {
  TraceRecord rec;
  rec.index = state_->step;
  rec.decision = AceStep(*state_, *instance_, params_, candidates);
  rec.total_weight = TotalWeight(*state_, instance_->graph(), params_);
  rec.admitted_count = state_->admitted.size();
  const bool admitted = rec.decision.admitted;
  trace_.push_back(std::move(rec));
  return admitted;
}

void GreedyAlgorithm::Reset(const Instance& instance) {
  instance_ = &instance;
  state_.emplace(instance.graph().node_count());
}

bool GreedyAlgorithm::Offer(std::span<const ChainCandidate> candidates) {
  const std::size_t index = state_->step++;
  for (const ChainCandidate& c : candidates) {
    if (HasResidualCapacity(state_->used, instance_->graph(), c)) {
      Admit(*state_, index, c);
      return true;
    }
  }
  return false;
}

}  // namespace chainflow
