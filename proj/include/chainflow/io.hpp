#pragma once

// JSON serialization of instances, solver results and auxiliary generator
// inputs. Every reader rejects unknown fields and reports the offending JSON
// path through Error::field().

#include <string>
#include <string_view>

#include "chainflow/instance.hpp"
#include "chainflow/solve_result.hpp"

namespace chainflow {

/// Instance document:
///   {"mode": "graph"|"explicit", "nodes": [{"id", "capacity"}...],
///    "edges": [[u, v]...], "functions": [[ids]...], "constraint":
///    {"mode": "max_length"|"stretch", "value"}, "requests": [{"s","t"} |
///    {"candidates": [[ids]...]}]}
/// `functions` and `constraint` appear in graph mode only.
Instance LoadInstance(std::string_view text);

/// Canonical form: fixed key order, sorted edges and host sets, compact JSON
/// followed by a newline. LoadInstance(SaveInstance(x)) reproduces x.
std::string SaveInstance(const Instance& instance);

/// {"admitted", "assignment": [{"request", "chain"}...], "objective",
///  "loads", "optimal"}
std::string SaveResult(const SolveResult& result);
SolveResult LoadResult(std::string_view text);

/// Plain graph input for the independent-set reduction:
///   {"vertices": n, "edges": [[u, v]...]}
/// Vertices receive capacity 1.
NetworkGraph LoadGraphInput(std::string_view text);
std::string SaveGraphInput(const NetworkGraph& graph);

}  // namespace chainflow
