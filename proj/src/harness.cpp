#include "chainflow/harness.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <limits>
#include <set>
#include <sstream>

#include "chainflow/error.hpp"
#include "chainflow/generators.hpp"
#include "chainflow/io.hpp"
#include "chainflow/offline.hpp"

namespace chainflow {

namespace fs = std::filesystem;

std::string_view MetricsHeader() {
  return "instance_id,seed,algorithm,objective,runtime_ms,ratio_vs_offline,bound,bound_satisfied";
}

namespace {

std::string FormatDouble(double x, int precision = 6) {
  if (std::isinf(x)) return "inf";
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double ParseDouble(const std::string& s, const std::string& field) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "not a number: \"" + s + "\"", field);
  }
}

std::uint64_t ParseUnsigned(const std::string& s, const std::string& field) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::kParse, "not a non-negative integer: \"" + s + "\"", field);
  }
  return std::stoull(s);
}

}  // namespace

std::string FormatMetricsRow(const MetricsRow& row) {
  std::string id = row.instance_id;
  std::replace(id.begin(), id.end(), ',', '_');
  std::ostringstream s;
  s << id << ',' << (row.seed ? std::to_string(*row.seed) : "") << ',' << row.algorithm << ','
    << row.objective << ',' << FormatDouble(row.runtime_ms) << ','
    << (row.ratio_vs_offline ? FormatDouble(*row.ratio_vs_offline) : "") << ','
    << FormatDouble(row.bound) << ','
    << (row.bound_satisfied ? (*row.bound_satisfied ? "true" : "false") : "");
  return s.str();
}

void AppendMetrics(const std::string& path, const std::vector<MetricsRow>& rows) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot open metrics file", path);
  if (fresh) out << MetricsHeader() << '\n';
  for (const MetricsRow& row : rows) out << FormatMetricsRow(row) << '\n';
}

std::vector<MetricsRow> ParseMetrics(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != MetricsHeader()) {
    throw Error(ErrorCode::kParse, "missing or unexpected metrics header", "line 1");
  }
  std::vector<MetricsRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    const auto cells = SplitCsvLine(line);
    if (cells.size() != 8) throw Error(ErrorCode::kParse, "expected 8 columns", where);
    MetricsRow row;
    row.instance_id = cells[0];
    if (!cells[1].empty()) row.seed = ParseUnsigned(cells[1], where);
    row.algorithm = cells[2];
    row.objective = ParseUnsigned(cells[3], where);
    row.runtime_ms = ParseDouble(cells[4], where);
    if (!cells[5].empty()) row.ratio_vs_offline = ParseDouble(cells[5], where);
    row.bound = ParseDouble(cells[6], where);
    if (cells[7] == "true") {
      row.bound_satisfied = true;
    } else if (cells[7] == "false") {
      row.bound_satisfied = false;
    } else if (!cells[7].empty()) {
      throw Error(ErrorCode::kParse, "expected true, false or empty", where);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double CompetitiveRatio(std::size_t offline, std::size_t online) {
  if (online == 0) return offline == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  return static_cast<double>(offline) / static_cast<double>(online);
}

EvaluationReport Evaluate(const Instance& instance, const SolveResult& online,
                          const SolveResult& offline, const AceParams& params,
                          const std::vector<TraceRecord>* trace) {
  for (const auto* r : {&online, &offline}) {
    const VerifyReport check = VerifySolution(instance, *r);
    if (!check) {
      throw Error(ErrorCode::kMismatchedInstance,
                  std::string(r == &online ? "online" : "offline") +
                      " result does not verify against the instance: " + check.Summary());
    }
  }
  EvaluationReport rep;
  rep.online = online.objective;
  rep.offline = offline.objective;
  rep.ratio = CompetitiveRatio(rep.offline, rep.online);
  rep.bound = params.competitive_bound();
  rep.bound_satisfied = rep.ratio <= rep.bound;

  const double per_admission = 2.0 * static_cast<double>(params.ell) * std::log2(params.mu);
  const double final_weight = TotalWeight(online.loads, instance.graph(), params);
  rep.weight_bound_residual = per_admission * static_cast<double>(online.objective) - final_weight;
  if (trace != nullptr) {
    for (const TraceRecord& rec : *trace) {
      rep.weight_bound_residual = std::min(
          rep.weight_bound_residual, per_admission * static_cast<double>(rec.admitted_count) - rec.total_weight);
    }
  }
  for (std::size_t i : offline.admitted) {
    if (!online.assignment.contains(i)) ++rep.offline_only;
  }
  rep.missed_bound_residual = final_weight - static_cast<double>(rep.offline_only * params.ell);
  return rep;
}

std::string EvaluationToJson(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["online"] = r.online;
  j["offline"] = r.offline;
  j["ratio"] = std::isinf(r.ratio) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(r.ratio);
  j["bound"] = r.bound;
  j["bound_satisfied"] = r.bound_satisfied;
  j["weight_bound_residual"] = r.weight_bound_residual;
  j["missed_bound_residual"] = r.missed_bound_residual;
  j["offline_only"] = r.offline_only;
  return j.dump(2) + "\n";
}

namespace {

// Usage problems detected after CLI11 parsing; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::shared_ptr<spdlog::logger> Logger() {
  if (auto existing = spdlog::get("chainflow")) return existing;
  auto logger = spdlog::stderr_color_mt("chainflow");
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("CHAINFLOW_LOG")) {
    logger->set_level(spdlog::level::from_str(env));
  }
  return logger;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read file", path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteFile(const std::string& path, std::string_view content) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write file", path);
  out << content;
}

// Chain count without materializing the enumeration in graph mode.
std::uint64_t ChainCount(const Instance& instance) {
  if (instance.mode() == InstanceMode::kGraph) {
    long double product = 1;
    for (const auto& hosts : instance.placement()->instances) product *= hosts.size();
    return product > 1.8e19L ? std::numeric_limits<std::uint64_t>::max()
                             : static_cast<std::uint64_t>(product);
  }
  std::set<ChainCandidate> distinct;
  for (const Request& r : instance.requests()) {
    distinct.insert(r.explicit_candidates->begin(), r.explicit_candidates->end());
  }
  return distinct.size();
}

struct GeneratorOptions {
  std::string type;
  std::size_t ell = 2;
  int kappa = 0;
  std::size_t n = 10;
  std::size_t instances = 2;
  std::size_t requests = 10;
  int cap_min = 1;
  int cap_max = 3;
  std::uint64_t r = 6;
  std::optional<double> stretch;
  double edge_prob = 0.2;
  std::uint64_t seed = 1;
  std::string input;
  std::size_t k = 3;
};

void AddGeneratorOptions(CLI::App* cmd, GeneratorOptions& g) {
  cmd->add_option("--ell", g.ell, "chain length (adversarial: power of two)");
  cmd->add_option("--kappa", g.kappa, "per-node capacity of the adversarial line");
  cmd->add_option("--n", g.n, "node count (random)");
  cmd->add_option("--instances", g.instances, "hosts per function type (random)");
  cmd->add_option("--requests", g.requests, "request count (random)");
  cmd->add_option("--cap-min", g.cap_min, "minimum node capacity (random)");
  cmd->add_option("--cap-max", g.cap_max, "maximum node capacity (random)");
  cmd->add_option("--r", g.r, "maximum walk length in hops (random)");
  cmd->add_option("--stretch", g.stretch, "stretch factor instead of --r (random)");
  cmd->add_option("--edge-prob", g.edge_prob, "extra edge probability (random)");
  cmd->add_option("--seed", g.seed, "random seed");
  cmd->add_option("--input", g.input, "graph (mis) or set system (ksp) JSON file");
  cmd->add_option("--k", g.k, "set size bound (ksp)");
}

Instance Generate(const GeneratorOptions& g, std::string* id) {
  if (g.type == "adversarial") {
    if (g.kappa == 0) throw UsageError("--kappa is required for --type adversarial");
    *id = "adversarial-l" + std::to_string(g.ell) + "-k" + std::to_string(g.kappa);
    return MakeAdversarialInstance(g.ell, g.kappa).instance;
  }
  if (g.type == "random") {
    RandomInstanceParams p;
    p.node_count = g.n;
    p.chain_length = g.ell;
    p.instances_per_function = g.instances;
    p.request_count = g.requests;
    p.capacity_min = g.cap_min;
    p.capacity_max = g.cap_max;
    p.constraint = g.stretch ? RouteConstraint::Stretch(*g.stretch) : RouteConstraint::MaxLength(g.r);
    p.edge_probability = g.edge_prob;
    *id = "random-s" + std::to_string(g.seed);
    return MakeRandomInstance(p, g.seed);
  }
  if (g.type == "mis") {
    if (g.input.empty()) throw UsageError("--input is required for --type mis");
    *id = fs::path(g.input).stem().string() + "-mis";
    return IndependentSetToInstance(LoadGraphInput(ReadFile(g.input)), g.ell);
  }
  if (g.type == "ksp") {
    if (g.input.empty()) throw UsageError("--input is required for --type ksp");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(ReadFile(g.input));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParse, e.what(), g.input);
    }
    std::size_t universe = 0;
    std::vector<std::vector<NodeId>> sets;
    try {
      for (const auto& item : doc.items()) {
        if (item.key() != "universe" && item.key() != "sets") {
          throw Error(ErrorCode::kParse, "unknown field", item.key());
        }
      }
      universe = doc.at("universe").get<std::size_t>();
      sets = doc.at("sets").get<std::vector<std::vector<NodeId>>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, e.what(), g.input);
    }
    *id = fs::path(g.input).stem().string() + "-ksp";
    return SetPackingToInstance(universe, sets, g.k);
  }
  throw UsageError("unknown --type \"" + g.type + "\"");
}

int CmdGenerate(const GeneratorOptions& g, const std::string& out_path, std::ostream& out) {
  std::string id;
  const Instance instance = Generate(g, &id);
  WriteFile(out_path, SaveInstance(instance));
  out << "wrote " << out_path << ": n=" << instance.graph().node_count()
      << " ell=" << instance.max_chain_length() << " requests=" << instance.requests().size()
      << " chains=" << ChainCount(instance) << "\n";
  return 0;
}

const std::set<std::string> kAlgorithms = {"ace", "greedy", "offline-bb", "offline-brute"};

struct RunOptions {
  std::string instance_path;
  std::vector<std::string> algorithms;
  std::string out_dir;
  std::string metrics;
  std::optional<double> mu;
  std::uint64_t node_budget = BranchAndBoundOptions{}.node_budget;
  std::size_t repetitions = 1;
};

struct AlgoOutput {
  std::string name;
  SolveResult result;
  double runtime_ms = 0.0;
};

int RunOneInstance(const Instance& instance, const std::string& id, std::optional<std::uint64_t> seed,
                   const RunOptions& opt, std::ostream& out) {
  auto log = Logger();
  const std::size_t ell = std::max<std::size_t>(1, instance.max_chain_length());
  const AceParams params = opt.mu ? AceParams::WithMu(ell, *opt.mu) : AceParams::ForChainLength(ell);
  const CandidateTable table = BuildCandidateTable(instance);

  std::vector<AlgoOutput> outputs;
  std::optional<std::size_t> offline_value;
  for (const std::string& algo : opt.algorithms) {
    AlgoOutput o;
    o.name = algo;
    const auto start = std::chrono::steady_clock::now();
    if (algo == "ace") {
      AceRun run = RunAce(instance, params, table);
      for (const std::string& w : run.warnings) log->warn("{}: {}", id, w);
      o.result = std::move(run.result);
      if (!opt.out_dir.empty()) {
        WriteFile((fs::path(opt.out_dir) / (id + ".ace.trace.jsonl")).string(), TraceToJsonLines(run.trace));
      }
    } else if (algo == "greedy") {
      o.result = RunGreedy(instance, table);
    } else if (algo == "offline-bb") {
      BranchAndBoundStats stats;
      o.result = BranchAndBound(instance, table, {opt.node_budget}, &stats);
      if (stats.budget_exhausted) log->warn("{}: branch-and-bound node budget exhausted", id);
      log->info("{}: branch-and-bound explored {} nodes", id, stats.nodes);
    } else {
      o.result = BruteForce(instance, table);
    }
    o.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    const VerifyReport check = VerifySolution(instance, o.result);
    if (!check) {
      throw Error(ErrorCode::kInvariantViolation, algo + " produced an infeasible result: " + check.Summary());
    }
    if (o.result.optimal) offline_value = o.result.objective;
    if (!opt.out_dir.empty()) {
      WriteFile((fs::path(opt.out_dir) / (id + "." + algo + ".json")).string(), SaveResult(o.result));
    }
    outputs.push_back(std::move(o));
  }

  std::vector<MetricsRow> rows;
  for (const AlgoOutput& o : outputs) {
    MetricsRow row;
    row.instance_id = id;
    row.seed = seed;
    row.algorithm = o.name;
    row.objective = o.result.objective;
    row.runtime_ms = o.runtime_ms;
    row.bound = params.competitive_bound();
    if (offline_value) {
      row.ratio_vs_offline = CompetitiveRatio(*offline_value, o.result.objective);
      row.bound_satisfied = *row.ratio_vs_offline <= row.bound;
    }
    out << id << " " << o.name << ": objective=" << o.result.objective;
    if (row.ratio_vs_offline) {
      out << " ratio=" << FormatDouble(*row.ratio_vs_offline) << " bound=" << FormatDouble(row.bound)
          << " bound_satisfied=" << (*row.bound_satisfied ? "true" : "false");
    }
    out << "\n";
    rows.push_back(std::move(row));
  }
  if (!opt.metrics.empty()) AppendMetrics(opt.metrics, rows);
  return 0;
}

int CmdRun(const RunOptions& opt, const GeneratorOptions& g, std::ostream& out) {
  if (opt.algorithms.empty()) throw UsageError("--algo needs at least one algorithm");
  for (const std::string& a : opt.algorithms) {
    if (!kAlgorithms.contains(a)) throw UsageError("unknown algorithm \"" + a + "\"");
  }
  if (!opt.instance_path.empty() == !g.type.empty()) {
    throw UsageError("give exactly one of --instance or --type");
  }
  if (!opt.instance_path.empty()) {
    const Instance instance = LoadInstance(ReadFile(opt.instance_path));
    return RunOneInstance(instance, fs::path(opt.instance_path).stem().string(), std::nullopt, opt, out);
  }
  for (std::size_t rep = 0; rep < opt.repetitions; ++rep) {
    GeneratorOptions gi = g;
    gi.seed = g.seed + rep;
    std::string id;
    const Instance instance = Generate(gi, &id);
    const bool seeded = g.type == "random";
    RunOneInstance(instance, id, seeded ? std::optional<std::uint64_t>(gi.seed) : std::nullopt, opt, out);
  }
  return 0;
}

int CmdEvaluate(const std::string& instance_path, const std::string& online_path,
                const std::string& offline_path, const std::string& trace_path,
                std::optional<double> mu, std::ostream& out) {
  const Instance instance = LoadInstance(ReadFile(instance_path));
  const SolveResult online = LoadResult(ReadFile(online_path));
  const SolveResult offline = LoadResult(ReadFile(offline_path));
  const std::size_t ell = std::max<std::size_t>(1, instance.max_chain_length());
  const AceParams params = mu ? AceParams::WithMu(ell, *mu) : AceParams::ForChainLength(ell);
  std::vector<TraceRecord> trace;
  if (!trace_path.empty()) trace = TraceFromJsonLines(ReadFile(trace_path));
  const EvaluationReport rep = Evaluate(instance, online, offline, params, trace_path.empty() ? nullptr : &trace);
  out << EvaluationToJson(rep);
  return 0;
}

int CmdExportIlp(const std::string& instance_path, const std::string& out_path, std::uint64_t cap,
                 std::ostream& out) {
  const Instance instance = LoadInstance(ReadFile(instance_path));
  const std::string lp = ExportLp(instance, cap);
  if (out_path.empty()) {
    out << lp;
  } else {
    WriteFile(out_path, lp);
  }
  return 0;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online admission and embedding of service chains"};
  app.name("chainflow");
  app.require_subcommand(1);

  GeneratorOptions gen;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "write a generated instance");
  generate->add_option("--type", gen.type, "adversarial | random | ksp | mis")->required();
  generate->add_option("--out", gen_out, "output instance file")->required();
  AddGeneratorOptions(generate, gen);

  RunOptions run_opt;
  GeneratorOptions run_gen;
  std::string algo_list;
  auto* run = app.add_subcommand("run", "run algorithms on an instance");
  run->add_option("--instance", run_opt.instance_path, "instance file");
  run->add_option("--algo", algo_list, "comma separated: ace, greedy, offline-bb, offline-brute")->required();
  run->add_option("--out-dir", run_opt.out_dir, "directory for result and trace files");
  run->add_option("--metrics", run_opt.metrics, "metrics CSV to append to");
  run->add_option("--mu", run_opt.mu, "override the ACE cost base (non-standard)");
  run->add_option("--node-budget", run_opt.node_budget, "branch-and-bound node budget");
  run->add_option("--repetitions", run_opt.repetitions, "generated instances (seeds seed..seed+R-1)");
  run->add_option("--type", run_gen.type, "generate instead of --instance");
  AddGeneratorOptions(run, run_gen);

  std::string eval_instance, eval_online, eval_offline, eval_trace;
  std::optional<double> eval_mu;
  auto* evaluate = app.add_subcommand("evaluate", "compare an online result with an offline one");
  evaluate->add_option("--instance", eval_instance, "instance file")->required();
  evaluate->add_option("--online", eval_online, "online result JSON")->required();
  evaluate->add_option("--offline", eval_offline, "offline result JSON")->required();
  evaluate->add_option("--trace", eval_trace, "ACE trace (JSON lines)");
  evaluate->add_option("--mu", eval_mu, "cost base used by the online run");

  std::string lp_instance, lp_out;
  std::uint64_t lp_cap = kDefaultEnumerationCap;
  auto* export_ilp = app.add_subcommand("export-ilp", "write the exact 0-1 program in LP format");
  export_ilp->add_option("--instance", lp_instance, "instance file")->required();
  export_ilp->add_option("--out", lp_out, "output LP file (stdout if omitted)");
  export_ilp->add_option("--cap", lp_cap, "chain enumeration cap");

  std::vector<std::string> argv_storage;
  argv_storage.push_back("chainflow");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*generate) return CmdGenerate(gen, gen_out, out);
    if (*run) {
      std::stringstream list(algo_list);
      std::string item;
      while (std::getline(list, item, ',')) {
        if (!item.empty()) run_opt.algorithms.push_back(item);
      }
      return CmdRun(run_opt, run_gen, out);
    }
    if (*evaluate) return CmdEvaluate(eval_instance, eval_online, eval_offline, eval_trace, eval_mu, out);
    if (*export_ilp) return CmdExportIlp(lp_instance, lp_out, lp_cap, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace chainflow
