#include "chainflow/generators.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "chainflow/error.hpp"

namespace chainflow {

namespace {

[[noreturn]] void BadParam(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::kInvalidParameter, message, field);
}

}  // namespace

std::size_t PhaseSchedule::total_requests() const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < phases.size(); ++i) total += phase_size(i);
  return total;
}

std::size_t PhaseSchedule::phase_begin(std::size_t phase) const {
  return phases[phase].front().first_request;
}

std::size_t PhaseSchedule::phase_size(std::size_t phase) const {
  std::size_t n = 0;
  for (const PhaseGroup& g : phases[phase]) n += g.request_count;
  return n;
}

AdversarialInstance MakeAdversarialInstance(std::size_t ell, int kappa) {
  if (ell < 2 || !std::has_single_bit(ell)) BadParam("ell", "must be a power of two >= 2");
  const std::size_t levels = std::bit_width(ell) - 1;  // log2 ell
  if (kappa < 1 || static_cast<std::size_t>(kappa) < levels) {
    BadParam("kappa", "must be >= log2(ell) = " + std::to_string(levels));
  }

  PhaseSchedule schedule;
  schedule.ell = ell;
  schedule.kappa = kappa;
  std::vector<Request> requests;
  for (std::size_t phase = 0; phase <= levels; ++phase) {
    const std::size_t groups = std::size_t{1} << phase;
    const std::size_t width = ell / groups;
    std::vector<PhaseGroup> row;
    for (std::size_t g = 0; g < groups; ++g) {
      PhaseGroup group;
      group.first_node = static_cast<NodeId>(g * width);
      group.last_node = static_cast<NodeId>((g + 1) * width - 1);
      group.first_request = requests.size();
      group.request_count = static_cast<std::size_t>(kappa);
      ChainCandidate segment;
      for (NodeId v = group.first_node; v <= group.last_node; ++v) segment.nodes.push_back(v);
      for (int r = 0; r < kappa; ++r) {
        requests.push_back({0, 0, std::vector<ChainCandidate>{segment}});
      }
      row.push_back(group);
    }
    schedule.phases.push_back(std::move(row));
  }
  NetworkGraph line(std::vector<int>(ell, kappa), {});
  return {Instance::Explicit(std::move(line), std::move(requests)), std::move(schedule)};
}

std::size_t PhaseWeightedAdmissions(const PhaseSchedule& schedule,
                                    const std::vector<std::size_t>& admitted_per_phase) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < admitted_per_phase.size(); ++i) {
    total += (schedule.ell >> i) * admitted_per_phase[i];
  }
  return total;
}

AdversaryOutcome RunAdversary(OnlineAlgorithm& algorithm, std::size_t ell, int kappa) {
  const AdversarialInstance adv = MakeAdversarialInstance(ell, kappa);
  const PhaseSchedule& schedule = adv.schedule;
  const auto& requests = adv.instance.requests();

  AdversaryOutcome out;
  algorithm.Reset(adv.instance);
  out.admitted_per_phase.assign(schedule.phase_count(), 0);
  for (std::size_t phase = 0; phase < schedule.phase_count(); ++phase) {
    const std::size_t begin = schedule.phase_begin(phase);
    for (std::size_t i = begin; i < begin + schedule.phase_size(phase); ++i) {
      if (algorithm.Offer(*requests[i].explicit_candidates)) ++out.admitted_per_phase[phase];
    }
  }
  out.capacity_used = PhaseWeightedAdmissions(schedule, out.admitted_per_phase);

  // Maximize OFF/ON, i.e. minimize ON_j / OFF_j, compared exactly by cross
  // multiplication.
  std::size_t online = 0;
  std::size_t best_online = 0, best_offline = 0;
  for (std::size_t j = 0; j < schedule.phase_count(); ++j) {
    online += out.admitted_per_phase[j];
    const std::size_t offline = schedule.phase_size(j);
    if (j == 0 || online * best_offline < best_online * offline) {
      out.stop_phase = j;
      best_online = online;
      best_offline = offline;
    }
  }
  out.online_admitted = best_online;
  out.offline_value = best_offline;
  out.ratio = best_online == 0 ? std::numeric_limits<double>::infinity()
                               : static_cast<double>(best_offline) / static_cast<double>(best_online);

  std::map<std::size_t, ChainCandidate> assignment;
  const std::size_t begin = schedule.phase_begin(out.stop_phase);
  for (std::size_t i = begin; i < begin + out.offline_value; ++i) {
    assignment.emplace(i, requests[i].explicit_candidates->front());
  }
  out.offline_solution = MakeResult(ell, std::move(assignment), true);
  return out;
}

Instance SetPackingToInstance(std::size_t universe_size, const std::vector<std::vector<NodeId>>& sets,
                              std::size_t k) {
  if (k < 3) BadParam("k", "must be >= 3");
  std::size_t next_aux = universe_size;
  std::vector<ChainCandidate> chains;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const std::string field = "sets[" + std::to_string(s) + "]";
    std::set<NodeId> elements(sets[s].begin(), sets[s].end());
    if (elements.size() != sets[s].size()) BadParam(field, "duplicate element");
    if (elements.size() > k) BadParam(field, "set has more than k elements");
    if (!elements.empty() && *elements.rbegin() >= universe_size) BadParam(field, "element outside the universe");
    ChainCandidate chain{{elements.begin(), elements.end()}};
    while (chain.size() < k) chain.nodes.push_back(static_cast<NodeId>(next_aux++));
    chains.push_back(std::move(chain));
  }
  std::vector<Request> requests(sets.size(), Request{0, 0, chains});
  return Instance::Explicit(NetworkGraph(std::vector<int>(next_aux, 1), {}), std::move(requests));
}

Instance IndependentSetToInstance(const NetworkGraph& graph, std::size_t ell) {
  if (ell < 3) BadParam("ell", "must be >= 3");
  const auto& edges = graph.edges();
  std::vector<ChainCandidate> chains(graph.node_count());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    chains[edges[e].u].nodes.push_back(static_cast<NodeId>(e));
    chains[edges[e].v].nodes.push_back(static_cast<NodeId>(e));
  }
  std::size_t next_aux = edges.size();
  for (std::size_t v = 0; v < chains.size(); ++v) {
    if (chains[v].size() > ell) {
      BadParam("vertices[" + std::to_string(v) + "]", "degree exceeds ell = " + std::to_string(ell));
    }
    while (chains[v].size() < ell) chains[v].nodes.push_back(static_cast<NodeId>(next_aux++));
  }
  std::vector<Request> requests(chains.size(), Request{0, 0, chains});
  return Instance::Explicit(NetworkGraph(std::vector<int>(next_aux, 1), {}), std::move(requests));
}

Instance MakeRandomInstance(const RandomInstanceParams& p, std::uint64_t seed) {
  if (p.node_count < 1) BadParam("n", "must be >= 1");
  if (p.chain_length < 1) BadParam("ell", "must be >= 1");
  if (p.instances_per_function < 1 || p.instances_per_function > p.node_count) {
    BadParam("instances", "must be in [1, n]");
  }
  if (p.capacity_min < 1 || p.capacity_max < p.capacity_min) {
    BadParam("capacity", "need 1 <= capacity_min <= capacity_max");
  }
  if (!(p.edge_probability >= 0.0 && p.edge_probability <= 1.0)) {
    BadParam("edge_probability", "must be in [0, 1]");
  }

  std::mt19937_64 rng(seed);
  const std::size_t n = p.node_count;
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::set<Edge> edge_set;
  auto add_edge = [&](NodeId a, NodeId b) { edge_set.insert(a < b ? Edge{a, b} : Edge{b, a}); };
  for (std::size_t i = 1; i < n; ++i) add_edge(perm[i], perm[uniform(0, i - 1)]);
  std::bernoulli_distribution extra(p.edge_probability);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      // Draw for every pair so the stream does not depend on the tree.
      const bool take = extra(rng);
      if (take) add_edge(a, b);
    }
  }

  std::vector<int> caps(n);
  for (int& c : caps) {
    c = static_cast<int>(uniform(static_cast<std::size_t>(p.capacity_min),
                                 static_cast<std::size_t>(p.capacity_max)));
  }

  FunctionPlacement placement;
  for (std::size_t j = 0; j < p.chain_length; ++j) {
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(p.instances_per_function);
    std::sort(pool.begin(), pool.end());
    placement.instances.push_back(std::move(pool));
  }

  std::vector<Request> requests;
  for (std::size_t i = 0; i < p.request_count; ++i) {
    const auto s = static_cast<NodeId>(uniform(0, n - 1));
    const auto t = static_cast<NodeId>(uniform(0, n - 1));
    requests.push_back({s, t, std::nullopt});
  }
  return Instance::Graph(NetworkGraph(std::move(caps), {edge_set.begin(), edge_set.end()}),
                         std::move(placement), p.constraint, std::move(requests));
}

}  // namespace chainflow
