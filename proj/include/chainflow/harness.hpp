#pragma once

// Experiment plumbing behind the `chainflow` command line tool.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chainflow/ace.hpp"
#include "chainflow/instance.hpp"
#include "chainflow/solve_result.hpp"

namespace chainflow {

struct MetricsRow {
  std::string instance_id;
  std::optional<std::uint64_t> seed;
  std::string algorithm;
  std::size_t objective = 0;
  double runtime_ms = 0.0;
  std::optional<double> ratio_vs_offline;  // OFF / objective
  double bound = 0.0;                      // 1 + 2 log2(mu)
  std::optional<bool> bound_satisfied;
};

/// Column names of the metrics CSV, in order.
std::string_view MetricsHeader();
std::string FormatMetricsRow(const MetricsRow& row);
/// Appends rows, writing the header first when the file is new or empty.
void AppendMetrics(const std::string& path, const std::vector<MetricsRow>& rows);
/// Parses a metrics CSV (header required).
std::vector<MetricsRow> ParseMetrics(std::string_view text);

/// OFF/ON with the conventions 0/0 = 1 and x/0 = +inf.
double CompetitiveRatio(std::size_t offline, std::size_t online);

struct EvaluationReport {
  std::size_t online = 0;
  std::size_t offline = 0;
  double ratio = 1.0;
  double bound = 0.0;
  bool bound_satisfied = true;
  /// min over steps of 2 l log2(mu) |A_j| - sum_v w_v(j); >= 0 expected.
  double weight_bound_residual = 0.0;
  /// sum_v w_v(final) - |A_OFF \ A| * l; >= 0 expected.
  double missed_bound_residual = 0.0;
  std::size_t offline_only = 0;  // |A_OFF \ A|
};

/// Compares an online result with an offline one on `instance`. Both results
/// must verify against the instance, otherwise Error(kMismatchedInstance).
/// Without a trace the weight-bound residual is taken at the final state only.
EvaluationReport Evaluate(const Instance& instance, const SolveResult& online,
                          const SolveResult& offline, const AceParams& params,
                          const std::vector<TraceRecord>* trace = nullptr);

std::string EvaluationToJson(const EvaluationReport& report);

/// Entry point of the command line tool. Exit codes: 0 ok, 1 runtime or
/// guard error, 2 usage error.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chainflow
