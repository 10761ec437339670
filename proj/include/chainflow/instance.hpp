#pragma once

// Problem data model: capacitated network, function placement, requests and
// the feasible service chains of each request.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace chainflow {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Undirected, unweighted network with per-node capacities. Edges are stored
/// normalized (u < v) and sorted.
class NetworkGraph {
 public:
  NetworkGraph() = default;

  /// Throws Error(kInvariantViolation) on self-loops, duplicate edges,
  /// out-of-range endpoints or capacities below 1.
  NetworkGraph(std::vector<int> capacities, std::vector<Edge> edges);

  std::size_t node_count() const { return capacities_.size(); }
  bool contains(NodeId v) const { return v < capacities_.size(); }
  int capacity(NodeId v) const { return capacities_[v]; }
  std::span<const int> capacities() const { return capacities_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }

 private:
  std::vector<int> capacities_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
};

/// An ordered tuple of hosting nodes, one per function type of the chain.
/// The same node may occupy several positions.
struct ChainCandidate {
  std::vector<NodeId> nodes;

  std::size_t size() const { return nodes.size(); }
  auto operator<=>(const ChainCandidate&) const = default;
};

/// For each function type F_1..F_l the (sorted, non-empty) set of nodes that
/// host an instance of it.
struct FunctionPlacement {
  std::vector<std::vector<NodeId>> instances;

  std::size_t chain_length() const { return instances.size(); }
};

struct Request {
  NodeId source = 0;
  NodeId target = 0;
  /// Present only in explicit-mode instances.
  std::optional<std::vector<ChainCandidate>> explicit_candidates;
};

/// Bound on the walk s -> v_1 -> ... -> v_l -> t. In stretch mode the hop
/// limit is ceil(value * d(s, t)).
struct RouteConstraint {
  enum class Mode { kMaxLength, kStretch };

  Mode mode = Mode::kMaxLength;
  double value = 0.0;

  static RouteConstraint MaxLength(std::uint64_t hops) {
    return {Mode::kMaxLength, static_cast<double>(hops)};
  }
  static RouteConstraint Stretch(double factor) { return {Mode::kStretch, factor}; }
};

enum class InstanceMode { kGraph, kExplicit };

/// Validated, immutable problem instance. Requests arrive in index order.
class Instance {
 public:
  /// Requests must not carry explicit candidates.
  static Instance Graph(NetworkGraph graph, FunctionPlacement placement,
                        RouteConstraint constraint, std::vector<Request> requests);
  /// Every request must carry a candidate list whose chains share one length
  /// and only reference nodes of `graph`.
  static Instance Explicit(NetworkGraph graph, std::vector<Request> requests);

  InstanceMode mode() const { return mode_; }
  const NetworkGraph& graph() const { return graph_; }
  const std::optional<FunctionPlacement>& placement() const { return placement_; }
  const std::optional<RouteConstraint>& constraint() const { return constraint_; }
  const std::vector<Request>& requests() const { return requests_; }

  /// l in graph mode; the longest candidate chain in explicit mode (0 when
  /// there is none).
  std::size_t max_chain_length() const;

 private:
  Instance() = default;

  InstanceMode mode_ = InstanceMode::kGraph;
  NetworkGraph graph_;
  std::optional<FunctionPlacement> placement_;
  std::optional<RouteConstraint> constraint_;
  std::vector<Request> requests_;
};

/// All-pairs hop distances, one BFS per node.
class DistanceTable {
 public:
  static constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

  explicit DistanceTable(const NetworkGraph& graph);

  std::size_t node_count() const { return n_; }
  std::uint32_t at(NodeId u, NodeId v) const { return dist_[std::size_t{u} * n_ + v]; }
  bool reachable(NodeId u, NodeId v) const { return at(u, v) != kUnreachable; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> dist_;
};

inline DistanceTable HopDistances(const NetworkGraph& graph) { return DistanceTable(graph); }

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Cartesian product instances[0] x ... x instances[l-1] in lexicographic
/// order. Throws Error(kEnumerationTooLarge) when the product exceeds `cap`.
std::vector<ChainCandidate> EnumerateChains(const FunctionPlacement& placement,
                                            std::uint64_t cap = kDefaultEnumerationCap);

/// d(s, v_1) + sum d(v_{i-1}, v_i) + d(v_l, t); nullopt if any leg is
/// unreachable.
std::optional<std::uint64_t> WalkLength(const DistanceTable& dist, const ChainCandidate& chain,
                                        const Request& request);

/// Hop limit for `request`; nullopt when no walk can satisfy it (stretch mode
/// with s and t disconnected).
std::optional<std::uint64_t> RouteLimit(const RouteConstraint& constraint, const DistanceTable& dist,
                                        const Request& request);

/// Chains through which `request` can be routed, in enumeration order.
std::vector<ChainCandidate> CandidateSet(const Instance& instance, const Request& request,
                                         std::uint64_t cap = kDefaultEnumerationCap);

/// candidates[i] is the candidate set of request i. Distances and the chain
/// enumeration are computed once.
using CandidateTable = std::vector<std::vector<ChainCandidate>>;

CandidateTable BuildCandidateTable(const Instance& instance,
                                   std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace chainflow
