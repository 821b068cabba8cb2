#pragma once

// Shared test programs with hand-checked reference solutions.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrux/cfg.hpp"
#include "lrux/oracle.hpp"

namespace fixtures {

// The worked example: a branch merges two cache shapes at s6, after which the
// interval analysis loses the hit at s7 -a-> s8 and the miss at s10 -c-> s11,
// while the set-based analyses recover both. Reference solution below was
// derived by hand from the concrete semantics at associativity 4.
inline constexpr const char* kWorkedExample = R"(cache assoc=4 sets=1 linesize=16
start s0 empty
edge s0 s1 a
edge s1 s2 c
edge s2 s3 b
edge s3 s4 d
edge s4 s6 -
edge s1 s5 b
edge s5 s6 -
edge s6 s7 c
edge s7 s8 a
edge s6 s9 a
edge s9 s10 e
edge s10 s11 c
)";

// Youngest-first concrete cache states per vertex.
inline const std::map<std::string, std::set<std::vector<std::string>>> kWorkedStates = {
    {"s0", {{}}},
    {"s1", {{"a"}}},
    {"s2", {{"c", "a"}}},
    {"s3", {{"b", "c", "a"}}},
    {"s4", {{"d", "b", "c", "a"}}},
    {"s5", {{"b", "a"}}},
    {"s6", {{"d", "b", "c", "a"}, {"b", "a"}}},
    {"s7", {{"c", "d", "b", "a"}, {"c", "b", "a"}}},
    {"s8", {{"a", "c", "d", "b"}, {"a", "c", "b"}}},
    {"s9", {{"a", "d", "b", "c"}, {"a", "b"}}},
    {"s10", {{"e", "a", "d", "b"}, {"e", "a", "b"}}},
    {"s11", {{"c", "e", "a", "d"}, {"c", "e", "a", "b"}}},
};

// Interval of possible ages per vertex and block, rendered like the analysis
// renders them. Block e is omitted: it is absent everywhere before s10.
inline const std::map<std::string, std::map<std::string, std::string>> kWorkedAges = {
    {"s0", {{"a", "inf"}, {"b", "inf"}, {"c", "inf"}, {"d", "inf"}}},
    {"s1", {{"a", "0"}, {"b", "inf"}, {"c", "inf"}, {"d", "inf"}}},
    {"s2", {{"a", "1"}, {"b", "inf"}, {"c", "0"}, {"d", "inf"}}},
    {"s3", {{"a", "2"}, {"b", "0"}, {"c", "1"}, {"d", "inf"}}},
    {"s4", {{"a", "3"}, {"b", "1"}, {"c", "2"}, {"d", "0"}}},
    {"s5", {{"a", "1"}, {"b", "0"}, {"c", "inf"}, {"d", "inf"}}},
    {"s6", {{"a", "[1,3]"}, {"b", "[0,1]"}, {"c", "[2,inf]"}, {"d", "[0,inf]"}}},
    {"s7", {{"a", "[2,inf]"}, {"b", "[1,2]"}, {"c", "0"}, {"d", "[1,inf]"}}},
    {"s8", {{"a", "0"}, {"b", "[2,3]"}, {"c", "1"}, {"d", "[2,inf]"}}},
    {"s9", {{"a", "0"}, {"b", "[1,2]"}, {"c", "[2,inf]"}, {"d", "[1,inf]"}}},
    {"s10", {{"a", "1"}, {"b", "[2,3]"}, {"c", "[3,inf]"}, {"d", "[2,inf]"}}},
    {"s11", {{"a", "2"}, {"b", "[3,inf]"}, {"c", "0"}, {"d", "[3,inf]"}}},
};

// Focused view per vertex and block: "A" is the absent value, any other
// entry lists the strictly-younger blocks as a sorted string ("" = none).
inline const std::map<std::string, std::map<std::string, std::set<std::string>>> kWorkedFocused = {
    {"s0", {{"a", {"A"}}, {"b", {"A"}}, {"c", {"A"}}, {"d", {"A"}}}},
    {"s1", {{"a", {""}}, {"b", {"A"}}, {"c", {"A"}}, {"d", {"A"}}}},
    {"s2", {{"a", {"c"}}, {"b", {"A"}}, {"c", {""}}, {"d", {"A"}}}},
    {"s3", {{"a", {"bc"}}, {"b", {""}}, {"c", {"b"}}, {"d", {"A"}}}},
    {"s4", {{"a", {"bcd"}}, {"b", {"d"}}, {"c", {"bd"}}, {"d", {""}}}},
    {"s5", {{"a", {"b"}}, {"b", {""}}, {"c", {"A"}}, {"d", {"A"}}}},
    {"s6", {{"a", {"bcd", "b"}}, {"b", {"d", ""}}, {"c", {"bd", "A"}}, {"d", {"", "A"}}}},
    {"s7", {{"a", {"bcd", "bc"}}, {"b", {"cd", "c"}}, {"c", {""}}, {"d", {"c", "A"}}}},
    {"s8", {{"a", {""}}, {"b", {"acd", "ac"}}, {"c", {"a"}}, {"d", {"ac", "A"}}}},
    {"s9", {{"a", {""}}, {"b", {"ad", "a"}}, {"c", {"abd", "A"}}, {"d", {"a", "A"}}}},
    {"s10", {{"a", {"e"}}, {"b", {"ade", "ae"}}, {"c", {"A"}}, {"d", {"ae", "A"}}}},
    {"s11", {{"a", {"ce"}}, {"b", {"A", "ace"}}, {"c", {""}}, {"d", {"ace", "A"}}}},
};

// Edge verdicts at associativity 4, keyed "src block dst".
inline const std::map<std::string, std::string> kWorkedVerdicts = {
    {"s0 a s1", "always-miss"},  {"s1 c s2", "always-miss"},  {"s2 b s3", "always-miss"},
    {"s3 d s4", "always-miss"},  {"s1 b s5", "always-miss"},  {"s6 c s7", "hit-and-miss"},
    {"s7 a s8", "always-hit"},   {"s6 a s9", "always-hit"},   {"s9 e s10", "always-miss"},
    {"s10 c s11", "always-miss"},
};

// What the interval analysis alone concludes for the same edges.
inline const std::map<std::string, std::string> kWorkedAgeVerdicts = {
    {"s0 a s1", "always-miss"},  {"s1 c s2", "always-miss"}, {"s2 b s3", "always-miss"},
    {"s3 d s4", "always-miss"},  {"s1 b s5", "always-miss"}, {"s6 c s7", "unknown"},
    {"s7 a s8", "unknown"},      {"s6 a s9", "always-hit"},  {"s9 e s10", "always-miss"},
    {"s10 c s11", "unknown"},
};

// One branch, three continuations: a always hits, b hits on one path and
// misses on the other, d never hits.
inline constexpr const char* kTwoPath = R"(cache assoc=4 sets=1 linesize=16
start p0 empty
edge p0 p1 a
edge p1 p2 b
edge p1 p2 c
edge p2 p3 a
edge p2 p4 b
edge p2 p5 d
)";

// Numeric labels spread over two sets; with two ways per set the second
// access to @0x0 hits (only @0x20 aged it) while @0x10 was evicted by
// @0x30 and @0x50.
inline constexpr const char* kTwoSets = R"(cache assoc=2 sets=2 linesize=16
start t0 empty
edge t0 t1 @0x0
edge t1 t2 @0x10
edge t2 t3 @0x30
edge t3 t4 @0x50
edge t4 t5 @0x20
edge t5 t6 @0x0
edge t6 t7 @0x10
)";

inline lrux::BlockId block_by_name(const lrux::ControlFlowGraph& g, const std::string& name) {
  for (std::size_t i = 0; i < g.block_table.size(); ++i)
    if (g.block_table[i].name == name) return static_cast<lrux::BlockId>(i);
  throw std::out_of_range("no block named " + name);
}

inline lrux::VertexId vertex_by_name(const lrux::ControlFlowGraph& g, const std::string& name) {
  const auto v = g.vertex_id(name);
  if (!v) throw std::out_of_range("no vertex named " + name);
  return *v;
}

// Decodes a focused-cell entry ("A", "", "bd", ...) against single-letter
// block names.
inline lrux::FocusedState cell_entry_to_state(const lrux::ControlFlowGraph& g, const std::string& entry) {
  if (entry == "A") return lrux::FocusedState::absent_marker();
  std::set<lrux::BlockId> younger;
  for (const char ch : entry) younger.insert(block_by_name(g, std::string(1, ch)));
  return lrux::FocusedState::with_younger(std::move(younger));
}

inline std::set<lrux::FocusedState> cell_to_states(const lrux::ControlFlowGraph& g,
                                                   const std::set<std::string>& cell) {
  std::set<lrux::FocusedState> out;
  for (const auto& entry : cell) out.insert(cell_entry_to_state(g, entry));
  return out;
}

inline lrux::ConcreteCacheState to_concrete(const lrux::ControlFlowGraph& g,
                                            const std::vector<std::string>& names) {
  lrux::ConcreteCacheState s;
  for (const auto& n : names) s.lines.push_back(block_by_name(g, n));
  return s;
}

}  // namespace fixtures
