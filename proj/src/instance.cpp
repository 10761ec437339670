#include "chainflow/instance.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "chainflow/error.hpp"

namespace chainflow {

namespace {

std::string Indexed(const std::string& name, std::size_t i) {
  return name + "[" + std::to_string(i) + "]";
}

[[noreturn]] void Violation(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::kInvariantViolation, message, field);
}

}  // namespace

NetworkGraph::NetworkGraph(std::vector<int> capacities, std::vector<Edge> edges)
    : capacities_(std::move(capacities)) {
  for (std::size_t v = 0; v < capacities_.size(); ++v) {
    if (capacities_[v] < 1) Violation(Indexed("nodes", v) + ".capacity", "capacity must be >= 1");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    Edge e = edges[i];
    if (!contains(e.u) || !contains(e.v)) Violation(Indexed("edges", i), "endpoint out of range");
    if (e.u == e.v) Violation(Indexed("edges", i), "self-loop");
    if (e.u > e.v) std::swap(e.u, e.v);
    edges[i] = e;
  }
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (edges[order[i]] == edges[order[i - 1]]) Violation(Indexed("edges", order[i]), "duplicate edge");
  }
  edges_.reserve(edges.size());
  for (std::size_t i : order) edges_.push_back(edges[i]);

  adjacency_.resize(capacities_.size());
  for (const Edge& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

Instance Instance::Graph(NetworkGraph graph, FunctionPlacement placement,
                         RouteConstraint constraint, std::vector<Request> requests) {
  if (placement.instances.empty()) Violation("functions", "at least one function type required");
  for (std::size_t j = 0; j < placement.instances.size(); ++j) {
    auto& hosts = placement.instances[j];
    if (hosts.empty()) Violation(Indexed("functions", j), "function type has no instance");
    std::sort(hosts.begin(), hosts.end());
    if (std::adjacent_find(hosts.begin(), hosts.end()) != hosts.end()) {
      Violation(Indexed("functions", j), "duplicate host node");
    }
    for (NodeId v : hosts) {
      if (!graph.contains(v)) Violation(Indexed("functions", j), "host node out of range");
    }
  }
  if (constraint.mode == RouteConstraint::Mode::kStretch) {
    if (!(constraint.value >= 1.0) || !std::isfinite(constraint.value)) {
      Violation("constraint.value", "stretch factor must be a finite number >= 1");
    }
  } else if (!(constraint.value >= 0.0) || constraint.value != std::floor(constraint.value) ||
             constraint.value > 9.0e15) {
    Violation("constraint.value", "max_length must be a non-negative integer");
  }
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const Request& r = requests[i];
    if (r.explicit_candidates) Violation(Indexed("requests", i), "graph-mode request with candidates");
    if (!graph.contains(r.source)) Violation(Indexed("requests", i) + ".s", "node out of range");
    if (!graph.contains(r.target)) Violation(Indexed("requests", i) + ".t", "node out of range");
  }
  Instance out;
  out.mode_ = InstanceMode::kGraph;
  out.graph_ = std::move(graph);
  out.placement_ = std::move(placement);
  out.constraint_ = constraint;
  out.requests_ = std::move(requests);
  return out;
}

Instance Instance::Explicit(NetworkGraph graph, std::vector<Request> requests) {
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const Request& r = requests[i];
    const std::string field = Indexed("requests", i);
    if (!r.explicit_candidates) Violation(field, "explicit-mode request without candidates");
    const auto& cands = *r.explicit_candidates;
    for (std::size_t c = 0; c < cands.size(); ++c) {
      const std::string cfield = field + "." + Indexed("candidates", c);
      if (cands[c].nodes.empty()) Violation(cfield, "empty chain");
      if (cands[c].size() != cands.front().size()) {
        Violation(cfield, "candidate length differs from the request's other candidates");
      }
      for (NodeId v : cands[c].nodes) {
        if (!graph.contains(v)) Violation(cfield, "node out of range");
      }
    }
  }
  Instance out;
  out.mode_ = InstanceMode::kExplicit;
  out.graph_ = std::move(graph);
  out.requests_ = std::move(requests);
  return out;
}

std::size_t Instance::max_chain_length() const {
  if (mode_ == InstanceMode::kGraph) return placement_->chain_length();
  std::size_t best = 0;
  for (const Request& r : requests_) {
    for (const ChainCandidate& c : *r.explicit_candidates) best = std::max(best, c.size());
  }
  return best;
}

DistanceTable::DistanceTable(const NetworkGraph& graph)
    : n_(graph.node_count()), dist_(n_ * n_, kUnreachable) {
  std::deque<NodeId> queue;
  for (NodeId src = 0; src < n_; ++src) {
    std::uint32_t* row = &dist_[std::size_t{src} * n_];
    row[src] = 0;
    queue.assign(1, src);
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      for (NodeId w : graph.neighbors(u)) {
        if (row[w] == kUnreachable) {
          row[w] = row[u] + 1;
          queue.push_back(w);
        }
      }
    }
  }
}

std::vector<ChainCandidate> EnumerateChains(const FunctionPlacement& placement, std::uint64_t cap) {
  const auto& sets = placement.instances;
  std::uint64_t total = 1;
  for (const auto& s : sets) {
    if (s.empty()) return {};
    if (total > cap / s.size()) {
      throw Error(ErrorCode::kEnumerationTooLarge,
                  "chain enumeration exceeds the cap of " + std::to_string(cap), "functions");
    }
    total *= s.size();
  }

  std::vector<ChainCandidate> out;
  out.reserve(total);
  std::vector<std::size_t> digit(sets.size(), 0);
  for (std::uint64_t k = 0; k < total; ++k) {
    ChainCandidate c;
    c.nodes.reserve(sets.size());
    for (std::size_t j = 0; j < sets.size(); ++j) c.nodes.push_back(sets[j][digit[j]]);
    out.push_back(std::move(c));
    // Odometer, last position fastest.
    for (std::size_t j = sets.size(); j-- > 0;) {
      if (++digit[j] < sets[j].size()) break;
      digit[j] = 0;
    }
  }
  return out;
}

std::optional<std::uint64_t> WalkLength(const DistanceTable& dist, const ChainCandidate& chain,
                                        const Request& request) {
  std::uint64_t total = 0;
  NodeId prev = request.source;
  auto leg = [&](NodeId a, NodeId b) {
    std::uint32_t d = dist.at(a, b);
    if (d == DistanceTable::kUnreachable) return false;
    total += d;
    return true;
  };
  for (NodeId v : chain.nodes) {
    if (!leg(prev, v)) return std::nullopt;
    prev = v;
  }
  if (!leg(prev, request.target)) return std::nullopt;
  return total;
}

std::optional<std::uint64_t> RouteLimit(const RouteConstraint& constraint, const DistanceTable& dist,
                                        const Request& request) {
  if (constraint.mode == RouteConstraint::Mode::kMaxLength) {
    return static_cast<std::uint64_t>(constraint.value);
  }
  std::uint32_t d = dist.at(request.source, request.target);
  if (d == DistanceTable::kUnreachable) return std::nullopt;
  // Absorbs representation error such as 1.1 * 10 = 11.000000000000002.
  return static_cast<std::uint64_t>(std::ceil(constraint.value * d - 1e-9));
}

namespace {

std::vector<ChainCandidate> FilterByLimit(const std::vector<ChainCandidate>& chains,
                                          const DistanceTable& dist, const RouteConstraint& constraint,
                                          const Request& request) {
  std::vector<ChainCandidate> out;
  auto limit = RouteLimit(constraint, dist, request);
  if (!limit) return out;
  for (const ChainCandidate& c : chains) {
    auto len = WalkLength(dist, c, request);
    if (len && *len <= *limit) out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<ChainCandidate> CandidateSet(const Instance& instance, const Request& request,
                                         std::uint64_t cap) {
  if (instance.mode() == InstanceMode::kExplicit) return *request.explicit_candidates;
  DistanceTable dist(instance.graph());
  return FilterByLimit(EnumerateChains(*instance.placement(), cap), dist, *instance.constraint(),
                       request);
}

CandidateTable BuildCandidateTable(const Instance& instance, std::uint64_t cap) {
  CandidateTable table;
  table.reserve(instance.requests().size());
  if (instance.mode() == InstanceMode::kExplicit) {
    for (const Request& r : instance.requests()) table.push_back(*r.explicit_candidates);
    return table;
  }
  const DistanceTable dist(instance.graph());
  const auto chains = EnumerateChains(*instance.placement(), cap);
  for (const Request& r : instance.requests()) {
    table.push_back(FilterByLimit(chains, dist, *instance.constraint(), r));
  }
  return table;
}

}  // namespace chainflow
