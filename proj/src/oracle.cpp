#include "lrux/oracle.hpp"

#include <algorithm>
#include <deque>

namespace lrux {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::AlwaysHit:
      return "always-hit";
    case Classification::AlwaysMiss:
      return "always-miss";
    case Classification::HitAndMiss:
      return "hit-and-miss";
    case Classification::Unknown:
      return "unknown";
  }
  throw std::logic_error("bad classification");
}

Classification classification_from_string(const std::string& s) {
  if (s == "always-hit") return Classification::AlwaysHit;
  if (s == "always-miss") return Classification::AlwaysMiss;
  if (s == "hit-and-miss") return Classification::HitAndMiss;
  if (s == "unknown") return Classification::Unknown;
  throw std::invalid_argument("bad classification '" + s + "'");
}

AccessOutcome access_concrete(const ConcreteCacheState& s, BlockId block, int associativity) {
  AccessOutcome out;
  out.state.lines.reserve(s.lines.size() + 1);
  out.state.lines.push_back(block);
  const auto hit_pos = std::find(s.lines.begin(), s.lines.end(), block);
  out.hit = hit_pos != s.lines.end();
  for (const BlockId b : s.lines)
    if (b != block) out.state.lines.push_back(b);
  if (out.state.lines.size() > static_cast<std::size_t>(associativity))
    out.state.lines.resize(static_cast<std::size_t>(associativity));  // evict the oldest
  return out;
}

std::vector<BlockId> oracle_universe(const ControlFlowGraph& g, int associativity) {
  std::vector<BlockId> universe = g.access_blocks();
  const auto filler_base = static_cast<BlockId>(g.block_table.size());
  for (int i = 0; i + 1 < associativity; ++i) universe.push_back(filler_base + i);
  return universe;
}

namespace {

void check_deadline(const OracleLimits& limits) {
  if (limits.deadline && std::chrono::steady_clock::now() > *limits.deadline) throw DeadlineExceeded();
}

// All LRU stacks of length 0..assoc over distinct universe blocks.
StateSet all_states(const std::vector<BlockId>& universe, int associativity, std::uint64_t budget) {
  StateSet out;
  ConcreteCacheState cur;
  std::vector<bool> used(universe.size(), false);
  const auto walk = [&](auto&& self) -> void {
    if (out.size() > budget) throw ExplosionGuardExceeded();
    out.insert(cur);
    if (cur.lines.size() == static_cast<std::size_t>(associativity)) return;
    for (std::size_t i = 0; i < universe.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      cur.lines.push_back(universe[i]);
      self(self);
      cur.lines.pop_back();
      used[i] = false;
    }
  };
  walk(walk);
  return out;
}

}  // namespace

std::map<VertexId, StateSet> collecting_semantics(const ControlFlowGraph& g, const CacheConfig& config,
                                                  const OracleLimits& limits) {
  config.validate();
  const int assoc = config.associativity;
  const std::vector<BlockId> universe = oracle_universe(g, assoc);

  std::map<VertexId, StateSet> states;
  std::uint64_t total = 0;
  std::deque<VertexId> queue;
  std::set<VertexId> queued;
  const auto enqueue = [&](VertexId v) {
    if (queued.insert(v).second) queue.push_back(v);
  };

  for (const auto& [v, kind] : g.starts) {
    StateSet seed = kind == StartKind::EmptyCache ? StateSet{ConcreteCacheState{}}
                                                  : all_states(universe, assoc, limits.max_states);
    total += seed.size();
    if (total > limits.max_states) throw ExplosionGuardExceeded();
    states[v] = std::move(seed);
    enqueue(v);
  }

  const auto adj = g.out_edges_by_vertex();
  while (!queue.empty()) {
    check_deadline(limits);
    const VertexId v = queue.front();
    queue.pop_front();
    queued.erase(v);
    const StateSet src = states[v];  // copy: successors may alias v
    for (const std::size_t i : adj[static_cast<std::size_t>(v)]) {
      const Edge& e = g.edges[i];
      StateSet& dst = states[e.dst];
      bool grew = false;
      for (const ConcreteCacheState& s : src) {
        ConcreteCacheState next = e.is_access() ? access_concrete(s, e.block, assoc).state : s;
        if (dst.insert(std::move(next)).second) {
          grew = true;
          if (++total > limits.max_states) throw ExplosionGuardExceeded();
        }
      }
      if (grew) enqueue(e.dst);
    }
  }
  return states;
}

std::map<EdgeId, Classification> classify_by_oracle(const ControlFlowGraph& g, const CacheConfig& config,
                                                    const OracleLimits& limits) {
  std::map<EdgeId, Classification> out;
  for (int set = 0; set < config.num_sets; ++set) {
    const bool any = std::any_of(g.edges.begin(), g.edges.end(), [&](const Edge& e) {
      return e.is_access() && g.block_set(e.block) == set;
    });
    if (!any) continue;
    const ControlFlowGraph sliced = config.num_sets == 1 ? g : slice_for_set(g, set);
    const auto states = collecting_semantics(sliced, config, limits);
    for (const Edge& e : sliced.edges) {
      if (!e.is_access()) continue;
      const auto it = states.find(e.src);
      if (it == states.end() || it->second.empty()) continue;  // unreachable
      bool can_hit = false, can_miss = false;
      for (const ConcreteCacheState& s : it->second) {
        const bool present = std::find(s.lines.begin(), s.lines.end(), e.block) != s.lines.end();
        (present ? can_hit : can_miss) = true;
        if (can_hit && can_miss) break;
      }
      out[e.id] = can_hit && can_miss ? Classification::HitAndMiss
                  : can_hit           ? Classification::AlwaysHit
                                      : Classification::AlwaysMiss;
    }
  }
  return out;
}

FocusedState focus_concrete(const ConcreteCacheState& s, BlockId focus) {
  const auto pos = std::find(s.lines.begin(), s.lines.end(), focus);
  if (pos == s.lines.end()) return FocusedState::absent_marker();
  return FocusedState::with_younger({s.lines.begin(), pos});
}

std::map<VertexId, std::set<FocusedState>> focused_semantics(const ControlFlowGraph& g, BlockId focus,
                                                             int associativity, const OracleLimits& limits) {
  const std::vector<BlockId> universe = oracle_universe(g, associativity);

  std::map<VertexId, std::set<FocusedState>> values;
  std::uint64_t total = 0;
  std::deque<VertexId> queue;
  std::set<VertexId> queued;
  const auto enqueue = [&](VertexId v) {
    if (queued.insert(v).second) queue.push_back(v);
  };
  const auto add = [&](VertexId v, FocusedState f) {
    if (values[v].insert(std::move(f)).second) {
      if (++total > limits.max_states) throw ExplosionGuardExceeded();
      enqueue(v);
      return true;
    }
    return false;
  };

  for (const auto& [v, kind] : g.starts) {
    add(v, FocusedState::absent_marker());
    if (kind == StartKind::TopCache) {
      // every subset of at most assoc-1 other blocks may sit above the focus
      std::vector<BlockId> others;
      for (const BlockId b : universe)
        if (b != focus) others.push_back(b);
      std::set<BlockId> cur;
      const auto walk = [&](auto&& self, std::size_t from) -> void {
        add(v, FocusedState::with_younger(cur));
        if (cur.size() + 1 >= static_cast<std::size_t>(associativity)) return;
        for (std::size_t i = from; i < others.size(); ++i) {
          cur.insert(others[i]);
          self(self, i + 1);
          cur.erase(others[i]);
        }
      };
      walk(walk, 0);
    }
  }

  // an access to the focus makes it youngest, whatever held before
  for (const Edge& e : g.edges)
    if (e.is_access() && e.block == focus) add(e.dst, FocusedState::with_younger({}));

  const auto adj = g.out_edges_by_vertex();
  while (!queue.empty()) {
    check_deadline(limits);
    const VertexId v = queue.front();
    queue.pop_front();
    queued.erase(v);
    const std::set<FocusedState> src = values[v];
    for (const std::size_t i : adj[static_cast<std::size_t>(v)]) {
      const Edge& e = g.edges[i];
      if (e.is_access() && e.block == focus) continue;  // handled above
      for (const FocusedState& f : src) {
        if (!e.is_access() || f.absent) {
          add(e.dst, f);
          continue;
        }
        std::set<BlockId> younger = f.younger;
        younger.insert(e.block);
        if (younger.size() < static_cast<std::size_t>(associativity))
          add(e.dst, FocusedState::with_younger(std::move(younger)));
        else
          add(e.dst, FocusedState::absent_marker());  // focus evicted
      }
    }
  }
  return values;
}

}  // namespace lrux
