#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "lrux/age.hpp"
#include "lrux/cfg.hpp"
#include "lrux/oracle.hpp"
#include "lrux/zdd.hpp"

namespace lrux {

using BlockSetFamily = std::set<std::set<BlockId>>;

// May-miss values: Bottom for unreached, Top once the focus block may be
// absent, otherwise an antichain of maximal younger-sets.
enum class MissTag { Bottom, Antichain, Top };

struct VertexAbstract {
  BlockSetFamily may_hit;  // antichain of minimal younger-sets
  MissTag miss_tag = MissTag::Bottom;
  BlockSetFamily may_miss;  // meaningful when miss_tag == Antichain

  friend bool operator==(const VertexAbstract&, const VertexAbstract&) = default;
};

struct EdgeVerdict {
  bool may_hit = false;
  bool may_miss = false;

  Classification classification() const {
    if (may_hit && may_miss) return Classification::HitAndMiss;
    return may_hit ? Classification::AlwaysHit : Classification::AlwaysMiss;
  }
  friend bool operator==(const EdgeVerdict&, const EdgeVerdict&) = default;
};

struct ExactOptions {
  WorklistOrder order = WorklistOrder::Fifo;
  bool keep_vertex_values = false;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct BlockResult {
  BlockId focus = 0;
  std::map<EdgeId, EdgeVerdict> verdicts;          // edges accessing the focus block
  std::map<VertexId, VertexAbstract> values;       // when keep_vertex_values
  std::uint64_t max_antichain_size = 0;            // over all stored per-vertex values
  std::map<VertexId, std::uint32_t> hit_updates;   // strict lattice climbs per location
  std::map<VertexId, std::uint32_t> miss_updates;
};

// Runs both antichain analyses for one focus block over a single-set graph
// in one worklist pass. Requires the focus to label at least one edge.
BlockResult analyze_block(const ControlFlowGraph& g, BlockId focus, int associativity,
                          const ExactOptions& options = {});

enum class ExactMode { ZddOnly, AgePlusZdd };

struct ClassifyOptions {
  ExactOptions exact;
  int jobs = 1;
  std::optional<BlockId> only_block;
};

struct ExactClassification {
  std::map<EdgeId, Classification> classes;  // never Unknown
  std::map<EdgeId, Classification> by_age;   // filled when mode == AgePlusZdd
  std::map<EdgeId, Classification> by_zdd;   // edges decided by the exact stage
};

// Slices per set, then classifies every access edge. AgePlusZdd runs the
// interval pre-analysis first and refines only blocks it left Unknown.
ExactClassification classify_exact(const ControlFlowGraph& g, const CacheConfig& config, ExactMode mode,
                                   const ClassifyOptions& options = {});

}  // namespace lrux
