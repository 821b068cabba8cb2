#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>

#include "lrux/cfg.hpp"
#include "lrux/oracle.hpp"

namespace lrux {

// Age of a block: its LRU stack position, 0 = youngest; kAgeInfinity when
// not cached.
inline constexpr std::uint32_t kAgeInfinity = std::numeric_limits<std::uint32_t>::max();

struct AgeInterval {
  std::uint32_t lo = kAgeInfinity;
  std::uint32_t hi = kAgeInfinity;

  bool definitely_cached(int associativity) const {
    return hi < static_cast<std::uint32_t>(associativity);
  }
  bool definitely_absent() const { return lo == kAgeInfinity; }
  friend bool operator==(const AgeInterval&, const AgeInterval&) = default;
};

std::string to_string(const AgeInterval& iv);  // "2", "[1,3]", "inf", "[2,inf]"

// One interval per block; blocks without an entry are [inf, inf].
struct AgeState {
  std::map<BlockId, AgeInterval> entries;

  AgeInterval get(BlockId b) const;
  friend bool operator==(const AgeState&, const AgeState&) = default;
};

AgeState age_update(const AgeState& s, BlockId accessed, int associativity);
AgeState age_join(const AgeState& a, const AgeState& b);

enum class WorklistOrder { Fifo, Lifo };

// Least fixpoint over a single-set graph. Empty starts begin all-absent,
// undefined starts begin with every labelled block unconstrained.
std::map<VertexId, AgeState> age_fixpoint(const ControlFlowGraph& g, const CacheConfig& config,
                                          WorklistOrder order = WorklistOrder::Fifo);

// Per-access-edge verdicts; slices per set internally. May answer Unknown.
std::map<EdgeId, Classification> classify_by_age(const ControlFlowGraph& g, const CacheConfig& config,
                                                 WorklistOrder order = WorklistOrder::Fifo);

}  // namespace lrux
