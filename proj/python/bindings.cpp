#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "chainflow/ace.hpp"
#include "chainflow/error.hpp"
#include "chainflow/generators.hpp"
#include "chainflow/instance.hpp"
#include "chainflow/io.hpp"
#include "chainflow/offline.hpp"

namespace py = pybind11;
using namespace chainflow;

namespace {

std::vector<std::vector<std::vector<NodeId>>> TableToLists(const CandidateTable& table) {
  std::vector<std::vector<std::vector<NodeId>>> out;
  for (const auto& cands : table) {
    auto& row = out.emplace_back();
    for (const ChainCandidate& c : cands) row.push_back(c.nodes);
  }
  return out;
}

py::dict OutcomeToDict(const AdversaryOutcome& o) {
  py::dict d;
  d["stop_phase"] = o.stop_phase;
  d["online_admitted"] = o.online_admitted;
  d["offline_value"] = o.offline_value;
  d["ratio"] = o.ratio;
  d["admitted_per_phase"] = o.admitted_per_phase;
  d["capacity_used"] = o.capacity_used;
  return d;
}

}  // namespace

PYBIND11_MODULE(_chainflow, m) {
  m.doc() = "Online admission and embedding of service chains";

  // Raised for every library error; carries `code` and `field` attributes.
  static py::handle error_type = py::exception<Error>(m, "ChainflowError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(ErrorCodeName(e.code()));
      exc.attr("field") = e.field();
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("mode",
                             [](const Instance& i) { return i.mode() == InstanceMode::kGraph ? "graph" : "explicit"; })
      .def_property_readonly("node_count", [](const Instance& i) { return i.graph().node_count(); })
      .def_property_readonly("request_count", [](const Instance& i) { return i.requests().size(); })
      .def_property_readonly("max_chain_length", &Instance::max_chain_length)
      .def_property_readonly("capacities", [](const Instance& i) {
        auto c = i.graph().capacities();
        return std::vector<int>(c.begin(), c.end());
      })
      .def("to_json", &SaveInstance)
      .def("__repr__", [](const Instance& i) {
        return "<Instance mode=" + std::string(i.mode() == InstanceMode::kGraph ? "graph" : "explicit") +
               " n=" + std::to_string(i.graph().node_count()) +
               " requests=" + std::to_string(i.requests().size()) + ">";
      });

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("admitted", &SolveResult::admitted)
      .def_readonly("objective", &SolveResult::objective)
      .def_readonly("loads", &SolveResult::loads)
      .def_readonly("optimal", &SolveResult::optimal)
      .def_property_readonly("assignment",
                             [](const SolveResult& r) {
                               std::map<std::size_t, std::vector<NodeId>> out;
                               for (const auto& [i, c] : r.assignment) out[i] = c.nodes;
                               return out;
                             })
      .def("to_json", &SaveResult)
      .def("__repr__", [](const SolveResult& r) {
        return "<SolveResult objective=" + std::to_string(r.objective) + ">";
      });

  py::class_<AceRun>(m, "AceRun")
      .def_readonly("result", &AceRun::result)
      .def_readonly("warnings", &AceRun::warnings)
      .def_property_readonly("mu", [](const AceRun& r) { return r.params.mu; })
      .def_property_readonly("trace_jsonl", [](const AceRun& r) { return TraceToJsonLines(r.trace); })
      .def_property_readonly("total_weights", [](const AceRun& r) {
        std::vector<double> w;
        for (const auto& rec : r.trace) w.push_back(rec.total_weight);
        return w;
      });

  m.def("load_instance", &LoadInstance, py::arg("text"));
  m.def("save_instance", &SaveInstance, py::arg("instance"));
  m.def("load_result", &LoadResult, py::arg("text"));

  m.def(
      "hop_distances",
      [](const Instance& inst) {
        DistanceTable d(inst.graph());
        std::vector<std::vector<std::optional<std::uint32_t>>> out(d.node_count());
        for (NodeId u = 0; u < d.node_count(); ++u) {
          for (NodeId v = 0; v < d.node_count(); ++v) {
            out[u].push_back(d.reachable(u, v) ? std::optional(d.at(u, v)) : std::nullopt);
          }
        }
        return out;
      },
      py::arg("instance"), "All-pairs hop distances; None marks unreachable pairs.");
  m.def(
      "candidate_table", [](const Instance& inst, std::uint64_t cap) { return TableToLists(BuildCandidateTable(inst, cap)); },
      py::arg("instance"), py::arg("cap") = kDefaultEnumerationCap);

  m.def(
      "ace_run",
      [](const Instance& inst, std::optional<double> mu) {
        const std::size_t ell = std::max<std::size_t>(1, inst.max_chain_length());
        return RunAce(inst, mu ? AceParams::WithMu(ell, *mu) : AceParams::ForChainLength(ell));
      },
      py::arg("instance"), py::arg("mu") = std::nullopt);
  m.def("greedy_run", py::overload_cast<const Instance&>(&RunGreedy), py::arg("instance"));
  m.def("brute_force", py::overload_cast<const Instance&, std::uint64_t>(&BruteForce), py::arg("instance"),
        py::arg("cap") = kDefaultSearchSpaceCap);
  m.def(
      "branch_and_bound",
      [](const Instance& inst, std::uint64_t node_budget) { return BranchAndBound(inst, BranchAndBoundOptions{node_budget}); },
      py::arg("instance"), py::arg("node_budget") = BranchAndBoundOptions{}.node_budget);
  m.def(
      "verify_solution",
      [](const Instance& inst, const SolveResult& r) {
        const VerifyReport rep = VerifySolution(inst, r);
        std::vector<std::string> constraints;
        for (const auto& v : rep.violations) constraints.push_back(v.constraint);
        return py::make_tuple(rep.ok(), constraints);
      },
      py::arg("instance"), py::arg("result"), "Returns (ok, violated constraint families).");
  m.def("export_lp", &ExportLp, py::arg("instance"), py::arg("cap") = kDefaultEnumerationCap);

  m.def(
      "adversarial_instance", [](std::size_t ell, int kappa) { return MakeAdversarialInstance(ell, kappa).instance; },
      py::arg("ell"), py::arg("kappa"));
  m.def(
      "adversary_run",
      [](const std::string& algorithm, std::size_t ell, int kappa) {
        if (algorithm == "ace") {
          AceAlgorithm ace;
          return OutcomeToDict(RunAdversary(ace, ell, kappa));
        }
        if (algorithm == "greedy") {
          GreedyAlgorithm greedy;
          return OutcomeToDict(RunAdversary(greedy, ell, kappa));
        }
        throw Error(ErrorCode::kInvalidParameter, "expected \"ace\" or \"greedy\"", "algorithm");
      },
      py::arg("algorithm"), py::arg("ell"), py::arg("kappa"));
  m.def("set_packing_instance", &SetPackingToInstance, py::arg("universe_size"), py::arg("sets"), py::arg("k"));
  m.def(
      "independent_set_instance",
      [](std::size_t vertices, const std::vector<std::pair<NodeId, NodeId>>& edges, std::size_t ell) {
        std::vector<Edge> e;
        for (auto [u, v] : edges) e.push_back({u, v});
        return IndependentSetToInstance(NetworkGraph(std::vector<int>(vertices, 1), std::move(e)), ell);
      },
      py::arg("vertices"), py::arg("edges"), py::arg("ell"));
  m.def(
      "random_instance",
      [](std::size_t n, std::size_t ell, std::size_t instances, std::size_t requests, int cap_min, int cap_max,
         std::uint64_t r, double edge_probability, std::uint64_t seed) {
        RandomInstanceParams p;
        p.node_count = n;
        p.chain_length = ell;
        p.instances_per_function = instances;
        p.request_count = requests;
        p.capacity_min = cap_min;
        p.capacity_max = cap_max;
        p.constraint = RouteConstraint::MaxLength(r);
        p.edge_probability = edge_probability;
        return MakeRandomInstance(p, seed);
      },
      py::arg("n"), py::arg("ell"), py::arg("instances"), py::arg("requests"), py::arg("cap_min") = 1,
      py::arg("cap_max") = 3, py::arg("r") = 6, py::arg("edge_probability") = 0.2, py::arg("seed") = 1);
}
