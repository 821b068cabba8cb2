#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrux/cfg.hpp"

namespace lrux {

enum class Classification { AlwaysHit, AlwaysMiss, HitAndMiss, Unknown };

std::string to_string(Classification c);
Classification classification_from_string(const std::string& s);

class ExplosionGuardExceeded : public std::runtime_error {
 public:
  ExplosionGuardExceeded() : std::runtime_error("state explosion guard exceeded") {}
};

class DeadlineExceeded : public std::runtime_error {
 public:
  DeadlineExceeded() : std::runtime_error("analysis deadline exceeded") {}
};

struct OracleLimits {
  std::uint64_t max_states = 1'000'000;  // total (vertex, state) pairs
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

// LRU stack, youngest first, distinct blocks; unused ways form an implicit
// suffix of empty lines.
struct ConcreteCacheState {
  std::vector<BlockId> lines;

  auto operator<=>(const ConcreteCacheState&) const = default;
};

struct AccessOutcome {
  ConcreteCacheState state;
  bool hit = false;
};

AccessOutcome access_concrete(const ConcreteCacheState& s, BlockId block, int associativity);

using StateSet = std::set<ConcreteCacheState>;

// Universe used to seed undefined-cache starts: the blocks accessed in g
// plus associativity-1 reserved filler blocks, so that eviction distances
// match a cache prefilled with arbitrary unrelated lines.
std::vector<BlockId> oracle_universe(const ControlFlowGraph& g, int associativity);

// Least fixpoint of per-state transfer over a single-set graph.
std::map<VertexId, StateSet> collecting_semantics(const ControlFlowGraph& g, const CacheConfig& config,
                                                  const OracleLimits& limits = {});

// Per-access-edge verdicts from the collecting semantics; slices per set
// internally. Unreachable and epsilon edges are omitted.
std::map<EdgeId, Classification> classify_by_oracle(const ControlFlowGraph& g, const CacheConfig& config,
                                                    const OracleLimits& limits = {});

// View of one block: absent from the cache, or the set of strictly younger
// blocks.
struct FocusedState {
  bool absent = true;
  std::set<BlockId> younger;

  auto operator<=>(const FocusedState&) const = default;
  static FocusedState absent_marker() { return {}; }
  static FocusedState with_younger(std::set<BlockId> s) { return {false, std::move(s)}; }
};

FocusedState focus_concrete(const ConcreteCacheState& s, BlockId focus);

// Least fixpoint of the focused transfer rules on a single-set graph; agrees
// pointwise with focus_concrete applied to the collecting semantics.
std::map<VertexId, std::set<FocusedState>> focused_semantics(const ControlFlowGraph& g, BlockId focus,
                                                             int associativity, const OracleLimits& limits = {});

}  // namespace lrux
