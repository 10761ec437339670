#include <doctest.h>

#include <cmath>
#include <string>

#include "chainflow/error.hpp"
#include "chainflow/instance.hpp"
#include "chainflow/io.hpp"
#include "fuzz.hpp"
#include "oracles.hpp"

using namespace chainflow;

namespace {

NetworkGraph Path(std::size_t n, int cap = 1) {
  std::vector<Edge> e;
  for (NodeId v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  return NetworkGraph(std::vector<int>(n, cap), std::move(e));
}

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("hop distances on small graphs") {
  const DistanceTable path(Path(3));
  CHECK(path.at(0, 2) == 2);
  CHECK(path.at(2, 0) == 2);
  for (NodeId v = 0; v < 3; ++v) CHECK(path.at(v, v) == 0);

  const NetworkGraph star({1, 1, 1, 1, 1}, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  CHECK(DistanceTable(star).at(1, 2) == 2);

  const DistanceTable split(NetworkGraph({1, 1, 1}, {{0, 1}}));
  CHECK_FALSE(split.reachable(0, 2));
  CHECK(split.reachable(2, 2));
}

TEST_CASE("hop distances agree with Floyd-Warshall, symmetric, triangle inequality") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Instance inst = fuzz::GraphInstance(seed, 14, 1, 0, 1, 1);
    const auto& g = inst.graph();
    const DistanceTable d(g);
    const auto ref = oracle::AllPairs(g.node_count(), g.edges());
    const auto n = static_cast<NodeId>(g.node_count());
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = 0; v < n; ++v) {
        REQUIRE(d.at(u, v) == d.at(v, u));
        REQUIRE(d.reachable(u, v) == (ref[u][v] < oracle::kInf));
        if (!d.reachable(u, v)) continue;
        REQUIRE(d.at(u, v) == ref[u][v]);
        for (NodeId w = 0; w < n; ++w) {
          if (d.reachable(u, w)) REQUIRE(d.at(u, v) <= std::uint64_t{d.at(u, w)} + d.at(w, v));
        }
      }
    }
  }
}

TEST_CASE("graph validation") {
  CHECK(CodeOf([] { NetworkGraph({1, 1}, {{0, 0}}); }) == ErrorCode::kInvariantViolation);
  CHECK(CodeOf([] { NetworkGraph({1, 1}, {{0, 1}, {1, 0}}); }) == ErrorCode::kInvariantViolation);
  CHECK(CodeOf([] { NetworkGraph({1, 1}, {{0, 2}}); }) == ErrorCode::kInvariantViolation);
  CHECK(CodeOf([] { NetworkGraph({1, 0}, {}); }) == ErrorCode::kInvariantViolation);
  const NetworkGraph g({1, 2, 3}, {{2, 0}, {1, 0}});
  CHECK(g.edges().front() == Edge{0, 1});
  CHECK(g.edges().back() == Edge{0, 2});
  CHECK(g.degree(0) == 2);
}

TEST_CASE("chain enumeration") {
  FunctionPlacement p{{{0}, {1, 2}}};
  const auto two = EnumerateChains(p);
  REQUIRE(two.size() == 2);
  CHECK(two[0].nodes == std::vector<NodeId>{0, 1});
  CHECK(two[1].nodes == std::vector<NodeId>{0, 2});

  const auto one = EnumerateChains(FunctionPlacement{{{0, 1, 2}}});
  REQUIRE(one.size() == 3);
  CHECK(one[2].nodes == std::vector<NodeId>{2});

  const auto twelve = EnumerateChains(FunctionPlacement{{{0, 1}, {2, 3, 4}, {5, 6}}});
  CHECK(twelve.size() == 12);
  CHECK(std::is_sorted(twelve.begin(), twelve.end()));

  CHECK(CodeOf([] { EnumerateChains(FunctionPlacement{{{0, 1}, {2, 3, 4}, {5, 6}}}, 11); }) ==
        ErrorCode::kEnumerationTooLarge);
  CHECK(EnumerateChains(FunctionPlacement{{{0, 1}, {2, 3, 4}, {5, 6}}}, 12).size() == 12);
}

TEST_CASE("enumeration size is the product of host set sizes") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = fuzz::GraphInstance(seed, 12, 3, 0, 1, 1);
    std::size_t product = 1;
    for (const auto& h : inst.placement()->instances) product *= h.size();
    CHECK(EnumerateChains(*inst.placement()).size() == product);
  }
}

TEST_CASE("walk length") {
  const DistanceTable d(Path(4));
  CHECK(WalkLength(d, ChainCandidate{{2, 1}}, Request{0, 3, {}}) == 5);
  CHECK(WalkLength(d, ChainCandidate{{0}}, Request{0, 0, {}}) == 0);

  // u adjacent to both endpoints, whole chain at u.
  const DistanceTable star(NetworkGraph({1, 1, 1}, {{0, 1}, {0, 2}}));
  CHECK(WalkLength(star, ChainCandidate{{0, 0, 0}}, Request{1, 2, {}}) == 2);

  const DistanceTable split(NetworkGraph({1, 1, 1}, {{0, 1}}));
  CHECK_FALSE(WalkLength(split, ChainCandidate{{2}}, Request{0, 1, {}}).has_value());
}

TEST_CASE("candidate set on a path") {
  auto make = [](std::uint64_t r) {
    return Instance::Graph(Path(4), FunctionPlacement{{{1, 2}}}, RouteConstraint::MaxLength(r),
                           {Request{0, 3, {}}});
  };
  const Instance r3 = make(3);
  CHECK(CandidateSet(r3, r3.requests()[0]).size() == 2);
  const Instance r2 = make(2);
  CHECK(CandidateSet(r2, r2.requests()[0]).empty());
  const Instance inf = make(1'000'000);
  CHECK(CandidateSet(inf, inf.requests()[0]) == EnumerateChains(*inf.placement()));
}

TEST_CASE("stretch limit") {
  const DistanceTable d(Path(4));
  CHECK(RouteLimit(RouteConstraint::Stretch(1.5), d, Request{0, 3, {}}) == 5);
  CHECK(RouteLimit(RouteConstraint::Stretch(1.0), d, Request{0, 3, {}}) == 3);
  // 1.1 * 10 is 11.000000000000002 in floating point; the limit stays 11.
  const DistanceTable long_path(Path(11));
  CHECK(RouteLimit(RouteConstraint::Stretch(1.1), long_path, Request{0, 10, {}}) == 11);
  const DistanceTable split(NetworkGraph({1, 1, 1}, {{0, 1}}));
  CHECK_FALSE(RouteLimit(RouteConstraint::Stretch(2.0), split, Request{0, 2, {}}).has_value());
}

TEST_CASE("candidate sets agree with an independent filter") {
  for (std::uint64_t seed = 100; seed < 300; ++seed) {
    const Instance inst = fuzz::GraphInstance(seed, 10, 3, 6, 1, 2);
    const CandidateTable table = BuildCandidateTable(inst);
    REQUIRE(table.size() == inst.requests().size());
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto expected = oracle::Candidates(inst, inst.requests()[i]);
      REQUIRE(table[i].size() == expected.size());
      for (std::size_t c = 0; c < expected.size(); ++c) REQUIRE(table[i][c].nodes == expected[c]);
      CHECK(CandidateSet(inst, inst.requests()[i]) == table[i]);
    }
  }
}

TEST_CASE("explicit instance validation") {
  const NetworkGraph g({1, 1, 1}, {});
  CHECK(CodeOf([&] {
          Instance::Explicit(g, {Request{0, 0, std::vector<ChainCandidate>{{{0, 1}}, {{2}}}}});
        }) == ErrorCode::kInvariantViolation);
  CHECK(CodeOf([&] { Instance::Explicit(g, {Request{0, 0, std::vector<ChainCandidate>{{{3}}}}}); }) ==
        ErrorCode::kInvariantViolation);
  CHECK(CodeOf([&] { Instance::Explicit(g, {Request{0, 0, std::nullopt}}); }) ==
        ErrorCode::kInvariantViolation);
  const Instance ok = Instance::Explicit(g, {Request{0, 0, std::vector<ChainCandidate>{{{0, 1}}, {{2, 2}}}}});
  CHECK(ok.max_chain_length() == 2);
}

TEST_CASE("load minimal graph document") {
  const Instance inst = LoadInstance(R"({"mode":"graph","nodes":[{"id":0,"capacity":2},{"id":1,"capacity":1}],
    "edges":[[0,1]],"functions":[[1]],"constraint":{"mode":"max_length","value":2},"requests":[{"s":0,"t":0}]})");
  CHECK(inst.mode() == InstanceMode::kGraph);
  CHECK(inst.graph().node_count() == 2);
  CHECK(inst.graph().capacity(0) == 2);
  CHECK(inst.max_chain_length() == 1);
  CHECK(CandidateSet(inst, inst.requests()[0]).size() == 1);
}

TEST_CASE("load errors carry codes and fields") {
  try {
    LoadInstance(R"({"mode":"graph","nodes":[{"id":0,"capacity":0}],"edges":[],"functions":[[0]],
      "constraint":{"mode":"max_length","value":2},"requests":[]})");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvariantViolation);
    CHECK(e.field() == "nodes[0].capacity");
  }
  try {
    LoadInstance(R"({"mode":"explicit","nodes":[{"id":0,"capacity":1},{"id":1,"capacity":1}],"edges":[],
      "requests":[{"candidates":[[0,1],[1]]}]})");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvariantViolation);
    CHECK(e.field().find("requests[0]") == 0);
  }
  CHECK(CodeOf([] { LoadInstance("{"); }) == ErrorCode::kParse);
  CHECK(CodeOf([] {
          LoadInstance(R"({"mode":"explicit","nodes":[{"id":0,"capacity":1}],"edges":[],"requests":[],"x":1})");
        }) == ErrorCode::kParse);
  CHECK(CodeOf([] {
          LoadInstance(R"({"mode":"explicit","nodes":[{"id":1,"capacity":1}],"edges":[],"requests":[]})");
        }) == ErrorCode::kParse);
}

TEST_CASE("save/load round trip is the identity") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = fuzz::GraphInstance(seed, 12, 3, 8, 1, 4);
    const std::string text = SaveInstance(inst);
    CHECK(text.back() == '\n');
    const Instance back = LoadInstance(text);
    CHECK(SaveInstance(back) == text);
    CHECK(back.graph().edges() == inst.graph().edges());
    CHECK(back.placement()->instances == inst.placement()->instances);
    CHECK(back.constraint()->value == inst.constraint()->value);
  }
  const Instance ex = Instance::Explicit(NetworkGraph({1, 3}, {{0, 1}}),
                                         {Request{0, 0, std::vector<ChainCandidate>{{{1, 0}}}}});
  CHECK(SaveInstance(LoadInstance(SaveInstance(ex))) == SaveInstance(ex));
}

TEST_CASE("graph input document") {
  const NetworkGraph g = LoadGraphInput(R"({"vertices":3,"edges":[[0,1],[1,2]]})");
  CHECK(g.node_count() == 3);
  CHECK(g.capacity(2) == 1);
  CHECK(LoadGraphInput(SaveGraphInput(g)).edges() == g.edges());
}
