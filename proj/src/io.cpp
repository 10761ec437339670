#include "chainflow/io.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <json.hpp>

#include "chainflow/error.hpp"

namespace chainflow {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void ParseError(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::kParse, message, path);
}

std::string At(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::string Dot(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

json ParseDocument(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    ParseError("", e.what());
  }
}

void ExpectObject(const json& j, const std::string& path,
                  std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) ParseError(path, "expected an object");
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      ParseError(Dot(path, item.key()), "unknown field");
    }
  }
}

const json& Require(const json& obj, std::string_view key, const std::string& path) {
  auto it = obj.find(std::string(key));
  if (it == obj.end()) ParseError(Dot(path, key), "missing field");
  return *it;
}

const json& RequireArray(const json& obj, std::string_view key, const std::string& path) {
  const json& a = Require(obj, key, path);
  if (!a.is_array()) ParseError(Dot(path, key), "expected an array");
  return a;
}

std::uint64_t ReadUnsigned(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    ParseError(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

NodeId ReadNode(const json& j, const std::string& path) {
  std::uint64_t v = ReadUnsigned(j, path);
  if (v > std::numeric_limits<NodeId>::max()) ParseError(path, "node id too large");
  return static_cast<NodeId>(v);
}

int ReadCapacity(const json& j, const std::string& path) {
  if (!j.is_number_integer()) ParseError(path, "expected an integer");
  std::int64_t c = j.get<std::int64_t>();
  if (c > std::numeric_limits<int>::max()) ParseError(path, "capacity too large");
  if (c < 1) throw Error(ErrorCode::kInvariantViolation, "capacity must be >= 1", path);
  return static_cast<int>(c);
}

std::vector<NodeId> ReadNodeList(const json& j, const std::string& path) {
  if (!j.is_array()) ParseError(path, "expected an array of node ids");
  std::vector<NodeId> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(ReadNode(j[i], At(path, i)));
  return out;
}

std::vector<Edge> ReadEdges(const json& arr, const std::string& path) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& e = arr[i];
    if (!e.is_array() || e.size() != 2) ParseError(At(path, i), "expected [u, v]");
    edges.push_back({ReadNode(e[0], At(path, i) + "[0]"), ReadNode(e[1], At(path, i) + "[1]")});
  }
  return edges;
}

std::vector<int> ReadNodes(const json& arr, const std::string& path) {
  std::vector<int> caps(arr.size(), 0);
  std::vector<bool> seen(arr.size(), false);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = At(path, i);
    ExpectObject(arr[i], p, {"id", "capacity"});
    NodeId id = ReadNode(Require(arr[i], "id", p), Dot(p, "id"));
    if (id >= arr.size()) ParseError(Dot(p, "id"), "node ids must be 0..n-1");
    if (seen[id]) ParseError(Dot(p, "id"), "duplicate node id");
    seen[id] = true;
    caps[id] = ReadCapacity(Require(arr[i], "capacity", p), Dot(p, "capacity"));
  }
  return caps;
}

RouteConstraint ReadConstraint(const json& j) {
  const std::string path = "constraint";
  ExpectObject(j, path, {"mode", "value"});
  const json& mode = Require(j, "mode", path);
  const json& value = Require(j, "value", path);
  if (!value.is_number()) ParseError("constraint.value", "expected a number");
  RouteConstraint c;
  if (mode == "max_length") {
    c.mode = RouteConstraint::Mode::kMaxLength;
  } else if (mode == "stretch") {
    c.mode = RouteConstraint::Mode::kStretch;
  } else {
    ParseError("constraint.mode", "expected \"max_length\" or \"stretch\"");
  }
  c.value = value.get<double>();
  return c;
}

ordered_json NodeListJson(const std::vector<NodeId>& nodes) {
  ordered_json a = ordered_json::array();
  for (NodeId v : nodes) a.push_back(v);
  return a;
}

}  // namespace

Instance LoadInstance(std::string_view text) {
  const json doc = ParseDocument(text);
  ExpectObject(doc, "", {"mode", "nodes", "edges", "functions", "constraint", "requests"});
  const json& mode = Require(doc, "mode", "");
  if (mode != "graph" && mode != "explicit") ParseError("mode", "expected \"graph\" or \"explicit\"");
  const bool graph_mode = mode == "graph";

  std::vector<int> caps = ReadNodes(RequireArray(doc, "nodes", ""), "nodes");
  std::vector<Edge> edges = ReadEdges(RequireArray(doc, "edges", ""), "edges");
  NetworkGraph graph(std::move(caps), std::move(edges));

  const json& reqs = RequireArray(doc, "requests", "");
  std::vector<Request> requests;
  requests.reserve(reqs.size());
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const std::string p = At("requests", i);
    Request r;
    if (graph_mode) {
      ExpectObject(reqs[i], p, {"s", "t"});
      r.source = ReadNode(Require(reqs[i], "s", p), Dot(p, "s"));
      r.target = ReadNode(Require(reqs[i], "t", p), Dot(p, "t"));
    } else {
      ExpectObject(reqs[i], p, {"candidates"});
      const json& cands = RequireArray(reqs[i], "candidates", p);
      std::vector<ChainCandidate> list;
      for (std::size_t c = 0; c < cands.size(); ++c) {
        list.push_back({ReadNodeList(cands[c], At(Dot(p, "candidates"), c))});
      }
      r.explicit_candidates = std::move(list);
    }
    requests.push_back(std::move(r));
  }

  if (!graph_mode) {
    if (doc.contains("functions")) ParseError("functions", "not allowed in explicit mode");
    if (doc.contains("constraint")) ParseError("constraint", "not allowed in explicit mode");
    return Instance::Explicit(std::move(graph), std::move(requests));
  }

  const json& funcs = RequireArray(doc, "functions", "");
  FunctionPlacement placement;
  for (std::size_t j = 0; j < funcs.size(); ++j) {
    placement.instances.push_back(ReadNodeList(funcs[j], At("functions", j)));
  }
  RouteConstraint constraint = ReadConstraint(Require(doc, "constraint", ""));
  return Instance::Graph(std::move(graph), std::move(placement), constraint, std::move(requests));
}

std::string SaveInstance(const Instance& instance) {
  const bool graph_mode = instance.mode() == InstanceMode::kGraph;
  ordered_json doc;
  doc["mode"] = graph_mode ? "graph" : "explicit";

  ordered_json nodes = ordered_json::array();
  const auto caps = instance.graph().capacities();
  for (std::size_t v = 0; v < caps.size(); ++v) {
    ordered_json node;
    node["id"] = v;
    node["capacity"] = caps[v];
    nodes.push_back(std::move(node));
  }
  doc["nodes"] = std::move(nodes);

  ordered_json edges = ordered_json::array();
  for (const Edge& e : instance.graph().edges()) edges.push_back({e.u, e.v});
  doc["edges"] = std::move(edges);

  if (graph_mode) {
    ordered_json funcs = ordered_json::array();
    for (const auto& hosts : instance.placement()->instances) funcs.push_back(NodeListJson(hosts));
    doc["functions"] = std::move(funcs);

    const RouteConstraint& c = *instance.constraint();
    ordered_json cj;
    if (c.mode == RouteConstraint::Mode::kMaxLength) {
      cj["mode"] = "max_length";
      cj["value"] = static_cast<std::uint64_t>(c.value);
    } else {
      cj["mode"] = "stretch";
      cj["value"] = c.value;
    }
    doc["constraint"] = std::move(cj);
  }

  ordered_json reqs = ordered_json::array();
  for (const Request& r : instance.requests()) {
    ordered_json rj;
    if (graph_mode) {
      rj["s"] = r.source;
      rj["t"] = r.target;
    } else {
      ordered_json cands = ordered_json::array();
      for (const ChainCandidate& c : *r.explicit_candidates) cands.push_back(NodeListJson(c.nodes));
      rj["candidates"] = std::move(cands);
    }
    reqs.push_back(std::move(rj));
  }
  doc["requests"] = std::move(reqs);
  return doc.dump() + "\n";
}

std::string SaveResult(const SolveResult& result) {
  ordered_json doc;
  doc["admitted"] = result.admitted;
  ordered_json assignment = ordered_json::array();
  for (const auto& [request, chain] : result.assignment) {
    ordered_json a;
    a["request"] = request;
    a["chain"] = NodeListJson(chain.nodes);
    assignment.push_back(std::move(a));
  }
  doc["assignment"] = std::move(assignment);
  doc["objective"] = result.objective;
  doc["loads"] = result.loads;
  doc["optimal"] = result.optimal;
  return doc.dump() + "\n";
}

SolveResult LoadResult(std::string_view text) {
  const json doc = ParseDocument(text);
  ExpectObject(doc, "", {"admitted", "assignment", "objective", "loads", "optimal"});
  SolveResult r;
  const json& admitted = RequireArray(doc, "admitted", "");
  for (std::size_t i = 0; i < admitted.size(); ++i) {
    r.admitted.push_back(ReadUnsigned(admitted[i], At("admitted", i)));
  }
  const json& assignment = RequireArray(doc, "assignment", "");
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const std::string p = At("assignment", i);
    ExpectObject(assignment[i], p, {"request", "chain"});
    std::size_t req = ReadUnsigned(Require(assignment[i], "request", p), Dot(p, "request"));
    ChainCandidate chain{ReadNodeList(Require(assignment[i], "chain", p), Dot(p, "chain"))};
    if (!r.assignment.emplace(req, std::move(chain)).second) {
      ParseError(Dot(p, "request"), "request assigned twice");
    }
  }
  r.objective = ReadUnsigned(Require(doc, "objective", ""), "objective");
  const json& loads = RequireArray(doc, "loads", "");
  for (std::size_t i = 0; i < loads.size(); ++i) {
    r.loads.push_back(static_cast<int>(ReadUnsigned(loads[i], At("loads", i))));
  }
  const json& optimal = Require(doc, "optimal", "");
  if (!optimal.is_boolean()) ParseError("optimal", "expected a boolean");
  r.optimal = optimal.get<bool>();
  return r;
}

NetworkGraph LoadGraphInput(std::string_view text) {
  const json doc = ParseDocument(text);
  ExpectObject(doc, "", {"vertices", "edges"});
  std::uint64_t n = ReadUnsigned(Require(doc, "vertices", ""), "vertices");
  if (n > 1'000'000) ParseError("vertices", "too many vertices");
  return NetworkGraph(std::vector<int>(n, 1), ReadEdges(RequireArray(doc, "edges", ""), "edges"));
}

std::string SaveGraphInput(const NetworkGraph& graph) {
  ordered_json doc;
  doc["vertices"] = graph.node_count();
  ordered_json edges = ordered_json::array();
  for (const Edge& e : graph.edges()) edges.push_back({e.u, e.v});
  doc["edges"] = std::move(edges);
  return doc.dump() + "\n";
}

}  // namespace chainflow
