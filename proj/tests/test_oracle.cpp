#include <map>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "lrux/generators.hpp"
#include "lrux/oracle.hpp"

using namespace lrux;

TEST_CASE("single access semantics") {
  const ConcreteCacheState s{{2, 1, 0}};  // youngest first

  auto hit = access_concrete(s, 0, 4);
  CHECK(hit.hit);
  CHECK(hit.state.lines == std::vector<BlockId>{0, 2, 1});

  auto fill = access_concrete(s, 3, 4);  // room left, nothing evicted
  CHECK(!fill.hit);
  CHECK(fill.state.lines == std::vector<BlockId>{3, 2, 1, 0});

  auto evict = access_concrete(fill.state, 4, 4);  // oldest leaves
  CHECK(!evict.hit);
  CHECK(evict.state.lines == std::vector<BlockId>{4, 3, 2, 1});

  auto young = access_concrete(s, 2, 4);  // already youngest
  CHECK(young.hit);
  CHECK(young.state.lines == s.lines);

  auto direct = access_concrete(s, 5, 1);  // direct-mapped set
  CHECK(!direct.hit);
  CHECK(direct.state.lines == std::vector<BlockId>{5});
}

TEST_CASE("collecting semantics reproduces the worked example") {
  const auto [g, config] = parse_cfg_string(fixtures::kWorkedExample);
  const auto states = collecting_semantics(g, config);
  REQUIRE(states.size() == 12);
  for (const auto& [vertex_name, expected] : fixtures::kWorkedStates) {
    StateSet want;
    for (const auto& lines : expected) want.insert(fixtures::to_concrete(g, lines));
    CHECK_MESSAGE(states.at(fixtures::vertex_by_name(g, vertex_name)) == want, "at ", vertex_name);
  }
}

TEST_CASE("oracle classification of the worked example") {
  const auto [g, config] = parse_cfg_string(fixtures::kWorkedExample);
  const auto verdicts = classify_by_oracle(g, config);
  CHECK(verdicts.size() == fixtures::kWorkedVerdicts.size());
  for (const auto& [key, expected] : fixtures::kWorkedVerdicts) {
    std::istringstream ks(key);
    std::string src, block, dst;
    ks >> src >> block >> dst;
    const auto id = g.find_edge(src, dst, block);
    REQUIRE(id.has_value());
    CHECK_MESSAGE(to_string(verdicts.at(*id)) == expected, key);
  }
}

TEST_CASE("three continuations of one branch") {
  const auto [g, config] = parse_cfg_string(fixtures::kTwoPath);
  const auto verdicts = classify_by_oracle(g, config);
  CHECK(verdicts.at(*g.find_edge("p2", "p3", "a")) == Classification::AlwaysHit);
  CHECK(verdicts.at(*g.find_edge("p2", "p4", "b")) == Classification::HitAndMiss);
  CHECK(verdicts.at(*g.find_edge("p2", "p5", "d")) == Classification::AlwaysMiss);
}

TEST_CASE("undefined start is seeded with filler lines") {
  const auto [g, config] = parse_cfg_string(
      "cache assoc=2 sets=1 linesize=16\n"
      "start v0 top\n"
      "edge v0 v1 a\n");
  CHECK(oracle_universe(g, 2) == std::vector<BlockId>{0, 1});  // a and one filler

  const auto states = collecting_semantics(g, config);
  CHECK(states.at(0).size() == 5);  // (), (a), (f), (a f), (f a)
  CHECK(states.at(1).size() == 2);  // (a), (a f)

  const auto verdicts = classify_by_oracle(g, config);
  CHECK(verdicts.at(0) == Classification::HitAndMiss);
}

TEST_CASE("focusing a concrete state") {
  CHECK(focus_concrete(ConcreteCacheState{{1, 0, 2}}, 0) == FocusedState::with_younger({1}));
  CHECK(focus_concrete(ConcreteCacheState{{1, 0, 2}}, 2) == FocusedState::with_younger({0, 1}));
  CHECK(focus_concrete(ConcreteCacheState{{1, 0, 2}}, 3) == FocusedState::absent_marker());
  CHECK(focus_concrete(ConcreteCacheState{}, 0) == FocusedState::absent_marker());
}

TEST_CASE("focused semantics is the focus of the collecting semantics") {
  const auto [g, config] = parse_cfg_string(fixtures::kWorkedExample);
  const auto states = collecting_semantics(g, config);
  for (const BlockId focus : g.access_blocks()) {
    const auto focused = focused_semantics(g, focus, config.associativity);
    REQUIRE(focused.size() == states.size());
    for (const auto& [v, concrete] : states) {
      std::set<FocusedState> want;
      for (const auto& s : concrete) want.insert(focus_concrete(s, focus));
      CHECK(focused.at(v) == want);
    }
  }

  // table cells, including both shapes that merge at s6
  for (const auto& [vertex_name, cells] : fixtures::kWorkedFocused) {
    for (const auto& [block_name, cell] : cells) {
      const auto focused = focused_semantics(g, fixtures::block_by_name(g, block_name), config.associativity);
      CHECK_MESSAGE(focused.at(fixtures::vertex_by_name(g, vertex_name)) == fixtures::cell_to_states(g, cell),
                    vertex_name, " focused on ", block_name);
    }
  }
}

TEST_CASE("focused semantics with an undefined start") {
  const auto [g, config] = parse_cfg_string(
      "cache assoc=2 sets=1 linesize=16\n"
      "start v0 top\n"
      "edge v0 v1 a\n");
  const auto focused = focused_semantics(g, 0, config.associativity);
  // absent, youngest, or behind one unknown line
  CHECK(focused.at(0) == std::set<FocusedState>{FocusedState::absent_marker(), FocusedState::with_younger({}),
                                                FocusedState::with_younger({1})});
  CHECK(focused.at(1) == std::set<FocusedState>{FocusedState::with_younger({})});

  const auto states = collecting_semantics(g, config);
  for (const auto& [v, concrete] : states) {
    std::set<FocusedState> want;
    for (const auto& s : concrete) want.insert(focus_concrete(s, 0));
    CHECK(focused.at(v) == want);
  }
}

TEST_CASE("state explosion guard") {
  const auto g = diamond_chain(20);
  CHECK_THROWS_AS(collecting_semantics(g, {32, 1, 16}), ExplosionGuardExceeded);

  OracleLimits tight;
  tight.max_states = 10;
  const auto [worked, config] = parse_cfg_string(fixtures::kWorkedExample);
  CHECK_THROWS_AS(collecting_semantics(worked, config, tight), ExplosionGuardExceeded);
}

TEST_CASE("deadline is honored") {
  OracleLimits limits;
  limits.deadline = std::chrono::steady_clock::now() - std::chrono::milliseconds(1);
  const auto [g, config] = parse_cfg_string(fixtures::kWorkedExample);
  CHECK_THROWS_AS(collecting_semantics(g, config, limits), DeadlineExceeded);
}

TEST_CASE("multi-set programs match a whole-cache simulation") {
  const auto [g, config] = parse_cfg_string(fixtures::kTwoSets);

  // simulate all sets at once, no slicing involved
  using WholeCache = std::vector<ConcreteCacheState>;
  std::map<VertexId, std::set<WholeCache>> reach;
  std::map<EdgeId, std::pair<bool, bool>> seen;  // hit seen, miss seen
  std::vector<std::pair<VertexId, WholeCache>> queue;
  for (const auto& [v, kind] : g.starts) {
    (void)kind;
    if (reach[v].insert(WholeCache(2)).second) queue.push_back({v, WholeCache(2)});
  }
  const auto adj = g.out_edges_by_vertex();
  while (!queue.empty()) {
    const auto [v, cache] = queue.back();
    queue.pop_back();
    for (const std::size_t i : adj[static_cast<std::size_t>(v)]) {
      const Edge& e = g.edges[i];
      WholeCache next = cache;
      if (e.is_access()) {
        const int set = g.block_set(e.block);
        const auto outcome = access_concrete(next[static_cast<std::size_t>(set)], e.block, config.associativity);
        next[static_cast<std::size_t>(set)] = outcome.state;
        auto& [hit, miss] = seen[e.id];
        (outcome.hit ? hit : miss) = true;
      }
      if (reach[e.dst].insert(next).second) queue.push_back({e.dst, next});
    }
  }

  const auto verdicts = classify_by_oracle(g, config);
  REQUIRE(verdicts.size() == seen.size());
  for (const auto& [id, hm] : seen) {
    const auto want = hm.first && hm.second ? Classification::HitAndMiss
                      : hm.first            ? Classification::AlwaysHit
                                            : Classification::AlwaysMiss;
    CHECK_MESSAGE(verdicts.at(id) == want, "edge ", id);
  }

  // and the concrete expectation: the second @0x0 hits, the second @0x10
  // was evicted by the other set-1 blocks
  CHECK(verdicts.at(*g.find_edge("t5", "t6", "@0x0")) == Classification::AlwaysHit);
  CHECK(verdicts.at(*g.find_edge("t6", "t7", "@0x10")) == Classification::AlwaysMiss);
  CHECK(verdicts.at(*g.find_edge("t0", "t1", "@0x0")) == Classification::AlwaysMiss);
}
