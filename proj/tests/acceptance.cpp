// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Expected values come from the oracles in oracles.hpp or from
// closed forms evaluated here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "chainflow/ace.hpp"
#include "chainflow/generators.hpp"
#include "chainflow/harness.hpp"
#include "chainflow/io.hpp"
#include "chainflow/offline.hpp"
#include "fuzz.hpp"
#include "oracles.hpp"

using namespace chainflow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Sum of kappa(v) (mu^{load/kappa} - 1), computed from loads only.
double WeightFromLoads(const NetworkGraph& g, const std::vector<int>& loads, double mu) {
  double total = 0.0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const double k = g.capacity(v);
    total += k * (std::pow(mu, loads[v] / k) - 1.0);
  }
  return total;
}

std::size_t CountSubset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  // |a \ b|
  std::set<std::size_t> sb(b.begin(), b.end());
  std::size_t n = 0;
  for (auto x : a) n += sb.count(x) == 0;
  return n;
}

// Fuzzed online runs shared by criteria 1 and 2.
struct FuzzRun {
  bool min_cap = false;
  std::size_t capacity_violations = 0;
  std::size_t weight_violations = 0;
  // Violating steps after some admitted chain placed one node at several
  // positions.
  std::size_t weight_violations_repeated = 0;
  double worst_weight_slack = 0.0;  // min over steps of (bound - sum w) / max(1, bound)
  std::size_t steps = 0;
};

std::vector<FuzzRun> online_runs;

void RunOnlineFuzz() {
  if (!online_runs.empty()) return;
  for (std::uint64_t seed = 0; seed < 1200; ++seed) {
    // Half of the corpus satisfies the capacity assumption, half does not
    // necessarily.
    const bool want_min_cap = seed % 2 == 0;
    std::mt19937_64 rng(seed * 7919 + 1);
    const std::size_t ell = 1 + rng() % 3;
    const int lo = want_min_cap ? fuzz::MinCapFor(ell) : 1;
    const int hi = lo + static_cast<int>(rng() % 3);

    RandomInstanceParams p;
    p.node_count = 2 + rng() % 29;  // <= 30
    p.chain_length = ell;
    p.instances_per_function = 1 + rng() % std::min<std::size_t>(p.node_count, 5);
    p.request_count = rng() % 41;  // <= 40
    p.capacity_min = lo;
    p.capacity_max = hi;
    p.edge_probability = 0.05 + 0.3 * static_cast<double>(rng() % 100) / 100.0;
    p.constraint = rng() % 4 == 0 ? RouteConstraint::Stretch(1.0 + 0.5 * static_cast<double>(rng() % 4))
                                  : RouteConstraint::MaxLength(ell + rng() % (2 * ell + 6));
    const Instance inst = MakeRandomInstance(p, rng());
    const CandidateTable table = BuildCandidateTable(inst);
    const AceParams params = DefaultParams(inst);
    const NetworkGraph& g = inst.graph();

    FuzzRun run;
    run.min_cap = MinCapacityAssumptionHolds(g, params);
    const double per_admission = 2.0 * static_cast<double>(params.ell) * std::log2(params.mu);
    OnlineState state(g.node_count());
    run.worst_weight_slack = std::numeric_limits<double>::infinity();
    bool repeated = false;
    for (const auto& cands : table) {
      const Decision d = AceStep(state, inst, params, cands);
      if (d.admitted) {
        repeated = repeated || std::set<NodeId>(d.chain->nodes.begin(), d.chain->nodes.end()).size() < d.chain->size();
      }
      ++run.steps;
      for (NodeId v = 0; v < g.node_count(); ++v) run.capacity_violations += state.used[v] > g.capacity(v);
      const double bound = per_admission * static_cast<double>(state.admitted.size());
      const double weight = WeightFromLoads(g, state.used, params.mu);
      const double scale = std::max(1.0, bound);
      if (weight > bound + 1e-6 * scale) {
        ++run.weight_violations;
        run.weight_violations_repeated += repeated;
      }
      run.worst_weight_slack = std::min(run.worst_weight_slack, (bound - weight) / scale);
    }
    online_runs.push_back(run);
  }
}

Outcome CapacityInvariant() {
  RunOnlineFuzz();
  std::size_t violations = 0, with_assumption = 0, steps = 0;
  for (const FuzzRun& r : online_runs) {
    violations += r.capacity_violations;
    with_assumption += r.min_cap;
    steps += r.steps;
  }
  std::ostringstream d;
  d << online_runs.size() << " instances (" << with_assumption << " with min capacity >= log2 mu), " << steps
    << " steps, " << violations << " overloaded node-steps";
  return {violations == 0 && online_runs.size() >= 1000, d.str()};
}

Outcome WeightBound() {
  RunOnlineFuzz();
  std::size_t checked = 0, violations = 0, repeated = 0, other_violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const FuzzRun& r : online_runs) {
    if (!r.min_cap) {
      other_violations += r.weight_violations;
      continue;
    }
    ++checked;
    violations += r.weight_violations;
    repeated += r.weight_violations_repeated;
    if (r.steps > 0) worst = std::min(worst, r.worst_weight_slack);
  }
  // Smallest case of the repeated-node effect: l = 3, kappa = 3 = log2(mu),
  // one chain through the same node three times.
  const Instance tiny = Instance::Explicit(
      NetworkGraph({3}, {}), {Request{0, 0, std::vector<ChainCandidate>{{{0, 0, 0}}}}});
  const AceRun tiny_run = RunAce(tiny);
  const double tiny_weight = WeightFromLoads(tiny.graph(), tiny_run.result.loads, tiny_run.params.mu);
  const double tiny_bound = 2.0 * 3.0 * std::log2(tiny_run.params.mu) * static_cast<double>(tiny_run.result.objective);

  std::ostringstream d;
  d << checked << " runs with min capacity >= log2 mu: " << violations << " violating steps ("
    << violations - repeated << " with distinct-node chains only, " << repeated
    << " after a chain repeating a node), min relative slack " << worst << "; e.g. l=3 kappa=3 chain (v,v,v): sum w "
    << tiny_weight << " > " << tiny_bound << "; runs without the capacity assumption: " << other_violations
    << " violating steps";
  return {violations == 0 && other_violations == 0 && checked > 0, d.str()};
}

// Small exactly solvable corpus shared by criteria 3 and 4.
struct SmallCase {
  Instance instance;
  CandidateTable table;
  SolveResult brute;
};

std::vector<SmallCase> small_cases;

void BuildSmallCorpus() {
  if (!small_cases.empty()) return;
  std::uint64_t seed = 0;
  while (small_cases.size() < 250) {
    std::mt19937_64 rng(seed++);
    // Tight capacities so that requests compete.
    Instance base = fuzz::SmallInstance(rng(), 8, 6, 0, static_cast<int>(rng() % 2), true);
    if (EnumerateChains(*base.placement()).size() > 6 || base.requests().size() > 8) continue;
    CandidateTable table = BuildCandidateTable(base);
    SolveResult brute = BruteForce(base, table);
    small_cases.push_back({std::move(base), std::move(table), std::move(brute)});
  }
}

Outcome OfflineComparison() {
  BuildSmallCorpus();
  std::size_t missed_fail = 0, ratio_fail = 0, assumption_missing = 0, strict_gap = 0;
  double worst_ratio = 1.0;
  for (const SmallCase& c : small_cases) {
    const AceParams params = DefaultParams(c.instance);
    if (!MinCapacityAssumptionHolds(c.instance.graph(), params)) ++assumption_missing;
    const AceRun ace = RunAce(c.instance, params, c.table);
    const std::size_t on = ace.result.objective;
    const std::size_t off = c.brute.objective;
    const double weight = WeightFromLoads(c.instance.graph(), ace.result.loads, params.mu);
    const std::size_t missed = CountSubset(c.brute.admitted, ace.result.admitted);
    const double lhs = static_cast<double>(missed * c.instance.max_chain_length());
    if (lhs > weight + 1e-9 * std::max(1.0, weight)) ++missed_fail;
    // OFF <= (1 + 2 log2(2l + 2)) ON on integers; ON = 0 forces OFF = 0.
    const double bound = 1.0 + 2.0 * std::log2(2.0 * static_cast<double>(c.instance.max_chain_length()) + 2.0);
    if (static_cast<double>(off) > bound * static_cast<double>(on)) ++ratio_fail;
    if (on > 0) worst_ratio = std::max(worst_ratio, static_cast<double>(off) / static_cast<double>(on));
    strict_gap += off > on;
  }
  std::ostringstream d;
  d << small_cases.size() << " instances, " << strict_gap << " with OFF > ON, worst OFF/ON " << worst_ratio << ", "
    << missed_fail << " missed-requests bound failures, " << ratio_fail << " ratio bound failures";
  return {small_cases.size() >= 200 && assumption_missing == 0 && missed_fail == 0 && ratio_fail == 0, d.str()};
}

Outcome SolverEquivalence() {
  BuildSmallCorpus();
  std::size_t mismatches = 0, unverified = 0;
  for (const SmallCase& c : small_cases) {
    const SolveResult bb = BranchAndBound(c.instance, c.table);
    mismatches += bb.objective != c.brute.objective || !bb.optimal;
    unverified += !VerifySolution(c.instance, bb).ok() || !VerifySolution(c.instance, c.brute).ok();
  }
  std::ostringstream d;
  d << small_cases.size() << " instances, " << mismatches << " objective mismatches, " << unverified
    << " infeasible results";
  return {mismatches == 0 && unverified == 0, d.str()};
}

Outcome ReductionOracles() {
  std::mt19937_64 rng(2024);
  std::size_t mis_bad = 0, ksp_bad = 0;
  std::size_t mis_max = 0, ksp_max = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    const double p = static_cast<double>(rng() % 100) / 100.0;
    std::vector<Edge> edges;
    std::vector<int> deg(n, 0);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (std::bernoulli_distribution(p)(rng) && deg[u] < 3 && deg[v] < 3) {
          edges.push_back({u, v});
          ++deg[u];
          ++deg[v];
        }
      }
    }
    const NetworkGraph g(std::vector<int>(n, 1), edges);
    const std::size_t expected = oracle::MaxIndependentSet(n, g.edges());
    const SolveResult r = BranchAndBound(IndependentSetToInstance(g, 3));
    mis_bad += r.objective != expected || !r.optimal;
    mis_max = std::max(mis_max, expected);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t universe = 3 + rng() % 12;
    std::vector<std::vector<NodeId>> sets(1 + rng() % 12);
    for (auto& s : sets) {
      std::set<NodeId> e;
      const std::size_t size = 1 + rng() % 3;
      while (e.size() < size) e.insert(static_cast<NodeId>(rng() % universe));
      s.assign(e.begin(), e.end());
    }
    const std::size_t expected = oracle::MaxSetPacking(sets);
    const SolveResult r = BranchAndBound(SetPackingToInstance(universe, sets, 3));
    ksp_bad += r.objective != expected || !r.optimal;
    ksp_max = std::max(ksp_max, expected);
  }
  std::ostringstream d;
  d << "independent set: 100 graphs, " << mis_bad << " mismatches (largest optimum " << mis_max
    << "); set packing: 100 systems, " << ksp_bad << " mismatches (largest optimum " << ksp_max << ")";
  return {mis_bad == 0 && ksp_bad == 0, d.str()};
}

Outcome LowerBoundGrowth() {
  std::vector<double> ratios;
  bool identity = true, feasible = true;
  std::ostringstream d;
  for (std::size_t ell : {4u, 16u, 64u}) {
    int kappa = 0;
    while ((std::size_t{1} << kappa) < 2 * ell + 2) ++kappa;  // ceil(log2(2l + 2))
    AceAlgorithm ace;
    const AdversaryOutcome o = RunAdversary(ace, ell, kappa);
    const AdversarialInstance adv = MakeAdversarialInstance(ell, kappa);
    std::size_t weighted = 0;
    for (std::size_t i = 0; i < o.admitted_per_phase.size(); ++i) weighted += (ell >> i) * o.admitted_per_phase[i];
    identity = identity && weighted <= ell * static_cast<std::size_t>(kappa) && weighted == o.capacity_used;
    feasible = feasible && VerifySolution(adv.instance, o.offline_solution).ok() &&
               o.offline_solution.objective == o.offline_value;
    ratios.push_back(o.ratio);
    d << "l=" << ell << " kappa=" << kappa << " OFF/ON=" << o.offline_value << "/" << o.online_admitted << "="
      << o.ratio << " used " << weighted << "/" << ell * static_cast<std::size_t>(kappa) << "; ";
  }
  const bool growth = ratios[0] <= ratios[1] && ratios[1] <= ratios[2];
  d << (growth ? "non-decreasing" : "NOT non-decreasing");
  return {growth && identity && feasible, d.str()};
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome Determinism() {
  const fs::path dir = fs::temp_directory_path() / ("chainflow-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream(dir / "sets.json") << R"({"universe":9,"sets":[[0,1,2],[2,3,4],[4,5,6],[6,7,8],[1,5]]})";
    std::ofstream(dir / "graph.json") << R"({"vertices":5,"edges":[[0,1],[1,2],[2,3],[3,4],[4,0]]})";
  }
  const std::vector<std::vector<std::string>> commands = {
      {"--type", "random", "--n", "20", "--ell", "2", "--instances", "3", "--requests", "15", "--seed", "7"},
      {"--type", "random", "--n", "30", "--ell", "3", "--instances", "2", "--requests", "40", "--seed", "11",
       "--stretch", "1.5"},
      {"--type", "random", "--n", "12", "--ell", "1", "--instances", "4", "--requests", "10", "--seed", "99",
       "--cap-min", "2", "--cap-max", "4"},
      {"--type", "adversarial", "--ell", "16", "--kappa", "6"},
      {"--type", "ksp", "--input", (dir / "sets.json").string(), "--k", "3"},
      {"--type", "mis", "--input", (dir / "graph.json").string(), "--ell", "3"},
  };
  std::size_t checked = 0, differing = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::vector<std::string> outputs, objectives;
    for (int round = 0; round < 2; ++round) {
      const std::string path = (dir / ("inst" + std::to_string(i) + "_" + std::to_string(round) + ".json")).string();
      std::vector<std::string> gen = {"generate"};
      gen.insert(gen.end(), commands[i].begin(), commands[i].end());
      gen.push_back("--out");
      gen.push_back(path);
      std::ostringstream out, err;
      if (RunCli(gen, out, err) != 0) {
        ++differing;
        continue;
      }
      outputs.push_back(Slurp(path));
      const std::string algos = commands[i][1] == "adversarial" ? "ace,greedy" : "ace,greedy,offline-bb";
      std::ostringstream run_out;
      if (RunCli({"run", "--algo", algos, "--instance", path}, run_out, err) != 0) {
        ++differing;
        continue;
      }
      // Objectives only; the id embeds the file name.
      std::string line, objs;
      std::istringstream lines(run_out.str());
      while (std::getline(lines, line)) objs += line.substr(line.find(' ')) + "\n";
      objectives.push_back(objs);
    }
    ++checked;
    if (outputs.size() != 2 || outputs[0] != outputs[1] || objectives.size() != 2 ||
        objectives[0] != objectives[1]) {
      ++differing;
    }
  }
  fs::remove_all(dir);
  std::ostringstream d;
  d << checked << " generate+run command pairs, " << differing << " differing";
  return {differing == 0, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "capacity invariant on fuzzed runs", CapacityInvariant},
      {2, "weight bound after every step", WeightBound},
      {3, "missed-requests bound and competitive ratio vs exact optimum", OfflineComparison},
      {4, "branch and bound equals brute force", SolverEquivalence},
      {5, "reductions match independent set / set packing oracles", ReductionOracles},
      {6, "adversary ratio growth and capacity identity", LowerBoundGrowth},
      {7, "determinism of generated files and objectives", Determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s [%s] (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    failures += !o.pass;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
