#include "chainflow/offline.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "chainflow/ace.hpp"
#include "chainflow/error.hpp"

namespace chainflow {

std::string VerifyReport::Summary() const {
  if (ok()) return "ok";
  std::ostringstream out;
  for (const Violation& v : violations) {
    out << v.constraint;
    if (v.request) out << " request=" << *v.request;
    if (v.node) out << " node=" << *v.node;
    out << ": " << v.message << "\n";
  }
  return out.str();
}

bool IsCandidate(const Instance& instance, const DistanceTable& dist, const Request& request,
                 const ChainCandidate& chain) {
  if (instance.mode() == InstanceMode::kExplicit) {
    const auto& cands = *request.explicit_candidates;
    return std::find(cands.begin(), cands.end(), chain) != cands.end();
  }
  const auto& hosts = instance.placement()->instances;
  if (chain.size() != hosts.size()) return false;
  for (std::size_t j = 0; j < hosts.size(); ++j) {
    if (!std::binary_search(hosts[j].begin(), hosts[j].end(), chain.nodes[j])) return false;
  }
  auto limit = RouteLimit(*instance.constraint(), dist, request);
  auto length = WalkLength(dist, chain, request);
  return limit && length && *length <= *limit;
}

VerifyReport VerifySolution(const Instance& instance, const SolveResult& result) {
  VerifyReport report;
  auto add = [&](std::string constraint, std::optional<std::size_t> request,
                 std::optional<NodeId> node, std::string message) {
    report.violations.push_back({std::move(constraint), request, node, std::move(message)});
  };

  const std::size_t k = instance.requests().size();
  const NetworkGraph& graph = instance.graph();
  std::set<std::size_t> admitted;
  for (std::size_t i : result.admitted) {
    if (i >= k) {
      add("index", i, std::nullopt, "admitted request does not exist");
      continue;
    }
    if (!admitted.insert(i).second) add("assignment", i, std::nullopt, "admitted twice");
    if (!result.assignment.contains(i)) add("assignment", i, std::nullopt, "admitted without a chain");
  }

  const DistanceTable dist(instance.mode() == InstanceMode::kGraph ? graph : NetworkGraph{});
  std::vector<int> loads(graph.node_count(), 0);
  for (const auto& [i, chain] : result.assignment) {
    if (i >= k) {
      add("index", i, std::nullopt, "assigned request does not exist");
      continue;
    }
    if (!admitted.contains(i)) add("assignment", i, std::nullopt, "rejected request holds a chain");
    bool in_range = true;
    for (NodeId v : chain.nodes) {
      if (!graph.contains(v)) {
        add("index", i, v, "chain node does not exist");
        in_range = false;
      } else {
        ++loads[v];
      }
    }
    if (in_range && !IsCandidate(instance, dist, instance.requests()[i], chain)) {
      add("candidate_set", i, std::nullopt, "chain is not a candidate of the request");
    }
  }

  for (NodeId v = 0; v < loads.size(); ++v) {
    if (loads[v] > graph.capacity(v)) {
      add("capacity", std::nullopt, v,
          "load " + std::to_string(loads[v]) + " exceeds capacity " + std::to_string(graph.capacity(v)));
    }
  }
  if (result.objective != result.admitted.size() || result.objective != result.assignment.size()) {
    add("objective", std::nullopt, std::nullopt,
        "objective " + std::to_string(result.objective) + " differs from the admitted count");
  }
  if (result.loads != loads) add("loads", std::nullopt, std::nullopt, "stored loads differ from the assignment");
  return report;
}

namespace {

void AddChain(std::vector<int>& used, const ChainCandidate& c, int delta) {
  for (NodeId v : c.nodes) used[v] += delta;
}

SolveResult FromChoices(const Instance& instance, const CandidateTable& table,
                        const std::vector<int>& choice, bool optimal) {
  std::map<std::size_t, ChainCandidate> assignment;
  for (std::size_t i = 0; i < choice.size(); ++i) {
    if (choice[i] >= 0) assignment.emplace(i, table[i][choice[i]]);
  }
  return MakeResult(instance.graph().node_count(), std::move(assignment), optimal);
}

// Orders equal-cardinality solutions: admitted set first, then positions.
bool LexBetter(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<std::size_t> sa, sb;
  std::vector<int> pa, pb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= 0) sa.push_back(i), pa.push_back(a[i]);
    if (b[i] >= 0) sb.push_back(i), pb.push_back(b[i]);
  }
  if (sa != sb) return sa < sb;
  return pa < pb;
}

}  // namespace

SolveResult BruteForce(const Instance& instance, std::uint64_t cap) {
  return BruteForce(instance, BuildCandidateTable(instance), cap);
}

SolveResult BruteForce(const Instance& instance, const CandidateTable& table, std::uint64_t cap) {
  std::uint64_t space = 1;
  for (const auto& cands : table) {
    const std::uint64_t branches = cands.size() + 1;
    if (space > cap / branches) {
      throw Error(ErrorCode::kSearchSpaceTooLarge,
                  "search space exceeds the cap of " + std::to_string(cap), "requests");
    }
    space *= branches;
  }

  const NetworkGraph& graph = instance.graph();
  const std::size_t k = table.size();
  std::vector<int> used(graph.node_count(), 0);
  std::vector<int> choice(k, -1);
  std::vector<int> best(k, -1);
  std::size_t best_count = 0;

  std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t i, std::size_t count) {
    if (i == k) {
      if (count > best_count || (count == best_count && LexBetter(choice, best))) {
        best = choice;
        best_count = count;
      }
      return;
    }
    for (std::size_t c = 0; c < table[i].size(); ++c) {
      const ChainCandidate& chain = table[i][c];
      if (!HasResidualCapacity(used, graph, chain)) continue;
      AddChain(used, chain, +1);
      choice[i] = static_cast<int>(c);
      visit(i + 1, count + 1);
      AddChain(used, chain, -1);
    }
    choice[i] = -1;
    visit(i + 1, count);
  };
  visit(0, 0);
  return FromChoices(instance, table, best, true);
}

SolveResult BranchAndBound(const Instance& instance, const BranchAndBoundOptions& options,
                           BranchAndBoundStats* stats) {
  return BranchAndBound(instance, BuildCandidateTable(instance), options, stats);
}

SolveResult BranchAndBound(const Instance& instance, const CandidateTable& table,
                           const BranchAndBoundOptions& options, BranchAndBoundStats* stats) {
  const NetworkGraph& graph = instance.graph();
  const std::size_t k = table.size();

  // Requests with identical candidate lists are interchangeable; they are
  // branched consecutively and only in canonical form (chain positions
  // non-decreasing, rejections last).
  std::map<std::vector<ChainCandidate>, std::size_t> class_ids;
  std::vector<std::size_t> cls(k);
  for (std::size_t i = 0; i < k; ++i) cls[i] = class_ids.emplace(table[i], class_ids.size()).first->second;
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (table[a].size() != table[b].size()) return table[a].size() < table[b].size();
    return cls[a] < cls[b];
  });
  // remaining[d]: requests at depth >= d that have any candidate.
  std::vector<std::size_t> remaining(k + 1, 0);
  for (std::size_t d = k; d-- > 0;) remaining[d] = remaining[d + 1] + (table[order[d]].empty() ? 0 : 1);

  std::vector<int> best(k, -1);
  std::size_t best_count = 0;
  {
    const SolveResult seed = RunGreedy(instance, table);
    for (const auto& [i, chain] : seed.assignment) {
      best[i] = static_cast<int>(std::find(table[i].begin(), table[i].end(), chain) - table[i].begin());
    }
    best_count = seed.objective;
  }

  std::vector<int> used(graph.node_count(), 0);
  std::vector<int> choice(k, -1);
  std::uint64_t nodes = 0;
  bool exhausted = false;

  std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t d, std::size_t count) {
    if (exhausted) return;
    if (++nodes > options.node_budget) {
      exhausted = true;
      return;
    }
    if (count + remaining[d] <= best_count) return;
    if (d == k) {
      best = choice;
      best_count = count;
      return;
    }
    const std::size_t i = order[d];
    std::size_t first = 0;
    if (d > 0 && cls[order[d - 1]] == cls[i]) {
      const int prev = choice[order[d - 1]];
      first = prev < 0 ? table[i].size() : static_cast<std::size_t>(prev);
    }
    for (std::size_t c = first; c < table[i].size(); ++c) {
      const ChainCandidate& chain = table[i][c];
      if (!HasResidualCapacity(used, graph, chain)) continue;
      AddChain(used, chain, +1);
      choice[i] = static_cast<int>(c);
      visit(d + 1, count + 1);
      AddChain(used, chain, -1);
      choice[i] = -1;
      if (exhausted) return;
    }
    visit(d + 1, count);
  };
  visit(0, 0);

  if (stats != nullptr) *stats = {nodes, exhausted};
  return FromChoices(instance, table, best, !exhausted);
}

namespace {

// Emits "name: t1 + t2 ..." wrapped so no line grows beyond a few hundred
// characters.
class RowWriter {
 public:
  explicit RowWriter(std::ostringstream& out) : out_(out) {}

  void Begin(const std::string& name) {
    out_ << " " << name << ":";
    terms_ = 0;
  }
  void Term(long long coef, const std::string& var) {
    if (terms_ > 0 && terms_ % 8 == 0) out_ << "\n  ";
    out_ << (coef < 0 ? " - " : (terms_ == 0 ? " " : " + "));
    const long long mag = coef < 0 ? -coef : coef;
    if (mag != 1) out_ << mag << " ";
    out_ << var;
    ++terms_;
  }
  void End(const std::string& sense_and_rhs) { out_ << " " << sense_and_rhs << "\n"; }
  void EndObjective() { out_ << "\n"; }

 private:
  std::ostringstream& out_;
  std::size_t terms_ = 0;
};

std::string ReqVar(std::size_t i) { return "x_" + std::to_string(i); }
std::string ChainVar(std::size_t c) { return "x_c" + std::to_string(c); }
std::string PairVar(std::size_t c, std::size_t i) { return ChainVar(c) + "_r" + std::to_string(i); }
std::string NodeVar(NodeId v) { return "x_v" + std::to_string(v); }

}  // namespace

std::string ExportLp(const Instance& instance, std::uint64_t cap) {
  const CandidateTable table = BuildCandidateTable(instance, cap);
  const NetworkGraph& graph = instance.graph();
  const std::size_t k = table.size();

  std::map<ChainCandidate, std::size_t> index;
  for (const auto& cands : table) {
    for (const ChainCandidate& c : cands) index.emplace(c, 0);
  }
  std::vector<const ChainCandidate*> chains;
  for (auto& [chain, id] : index) {
    id = chains.size();
    chains.push_back(&chain);
  }
  // members[c]: requests i with chain c in S_c, ascending.
  std::vector<std::vector<std::size_t>> members(chains.size());
  std::vector<std::vector<std::size_t>> chains_of(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (const ChainCandidate& c : table[i]) {
      const std::size_t id = index.at(c);
      members[id].push_back(i);
      chains_of[i].push_back(id);
    }
    std::sort(chains_of[i].begin(), chains_of[i].end());
  }
  // containing[v]: (chain id, multiplicity of v in it).
  std::vector<std::vector<std::pair<std::size_t, int>>> containing(graph.node_count());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    std::map<NodeId, int> mult;
    for (NodeId v : chains[c]->nodes) ++mult[v];
    for (const auto& [v, m] : mult) containing[v].emplace_back(c, m);
  }

  std::ostringstream out;
  RowWriter row(out);
  out << "\\ maximum admission service chain embedding\n";
  out << "Maximize\n";
  row.Begin("obj");
  for (std::size_t i = 0; i < k; ++i) row.Term(1, ReqVar(i));
  row.EndObjective();

  out << "Subject To\n";
  for (std::size_t i = 0; i < k; ++i) {
    row.Begin("assign_r" + std::to_string(i));
    row.Term(1, ReqVar(i));
    for (std::size_t c : chains_of[i]) row.Term(-1, PairVar(c, i));
    row.End("= 0");
  }
  for (std::size_t c = 0; c < chains.size(); ++c) {
    std::set<NodeId> distinct(chains[c]->nodes.begin(), chains[c]->nodes.end());
    for (NodeId v : distinct) {
      row.Begin("use_c" + std::to_string(c) + "_v" + std::to_string(v));
      row.Term(1, ChainVar(c));
      row.Term(-1, NodeVar(v));
      row.End("<= 0");
    }
  }
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    row.Begin("cover_v" + std::to_string(v));
    for (const auto& [c, m] : containing[v]) row.Term(1, ChainVar(c));
    row.Term(-1, NodeVar(v));
    row.End(">= 0");
  }
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    row.Begin("cap_v" + std::to_string(v));
    for (const auto& [c, m] : containing[v]) {
      for (std::size_t i : members[c]) row.Term(m, PairVar(c, i));
    }
    row.Term(-static_cast<long long>(graph.capacity(v)), NodeVar(v));
    row.End("<= 0");
  }

  out << "Binary\n";
  for (std::size_t i = 0; i < k; ++i) out << " " << ReqVar(i) << "\n";
  for (std::size_t c = 0; c < chains.size(); ++c) out << " " << ChainVar(c) << "\n";
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (std::size_t i : members[c]) out << " " << PairVar(c, i) << "\n";
  }
  for (NodeId v = 0; v < graph.node_count(); ++v) out << " " << NodeVar(v) << "\n";
  out << "End\n";
  return out.str();
}

}  // namespace chainflow
