#include "lrux/age.hpp"

#include <algorithm>
#include <deque>

namespace lrux {

namespace {

// Saturating successor: ages beyond the last way collapse to infinity.
std::uint32_t age_inc(std::uint32_t v, int associativity) {
  if (v == kAgeInfinity || v >= static_cast<std::uint32_t>(associativity) - 1) return kAgeInfinity;
  return v + 1;
}

std::uint32_t age_dec(std::uint32_t v) {
  if (v == kAgeInfinity || v == 0) return v;
  return v - 1;
}

}  // namespace

std::string to_string(const AgeInterval& iv) {
  const auto one = [](std::uint32_t v) { return v == kAgeInfinity ? std::string("inf") : std::to_string(v); };
  if (iv.lo == iv.hi) return one(iv.lo);
  return "[" + one(iv.lo) + "," + one(iv.hi) + "]";
}

AgeInterval AgeState::get(BlockId b) const {
  const auto it = entries.find(b);
  return it == entries.end() ? AgeInterval{} : it->second;
}

AgeState age_update(const AgeState& s, BlockId accessed, int associativity) {
  const AgeInterval prior = s.get(accessed);
  AgeState out;
  for (const auto& [x, iv] : s.entries) {
    if (x == accessed) continue;
    // x aged by one if it could be younger than the accessed block (that
    // block moved past it), and kept its age if it could be older.
    const bool younger_possible = iv.lo < prior.hi;
    const bool older_possible = iv.hi > prior.lo;
    AgeInterval next;
    if (younger_possible) {
      next = {age_inc(iv.lo, associativity), age_inc(std::min(iv.hi, age_dec(prior.hi)), associativity)};
      if (older_possible) {
        next.lo = std::min(next.lo, std::max(iv.lo, age_inc(prior.lo, associativity)));
        next.hi = std::max(next.hi, iv.hi);
      }
    } else if (older_possible) {
      next = {std::max(iv.lo, age_inc(prior.lo, associativity)), iv.hi};
    } else {
      next = iv;
    }
    if (next.lo != kAgeInfinity || next.hi != kAgeInfinity) out.entries[x] = next;
  }
  out.entries[accessed] = {0, 0};
  return out;
}

AgeState age_join(const AgeState& a, const AgeState& b) {
  AgeState out;
  const auto merge = [&](const AgeState& lhs, const AgeState& rhs) {
    for (const auto& [x, iv] : lhs.entries) {
      const AgeInterval other = rhs.get(x);
      out.entries[x] = {std::min(iv.lo, other.lo), std::max(iv.hi, other.hi)};
    }
  };
  merge(a, b);
  merge(b, a);
  return out;
}

std::map<VertexId, AgeState> age_fixpoint(const ControlFlowGraph& g, const CacheConfig& config,
                                          WorklistOrder order) {
  config.validate();
  const int assoc = config.associativity;
  const std::vector<BlockId> labelled = g.access_blocks();

  std::map<VertexId, AgeState> values;
  std::deque<VertexId> queue;
  std::set<VertexId> queued;
  const auto enqueue = [&](VertexId v) {
    if (queued.insert(v).second) queue.push_back(v);
  };

  for (const auto& [v, kind] : g.starts) {
    AgeState seed;
    if (kind == StartKind::TopCache)
      for (const BlockId b : labelled) seed.entries[b] = {0, kAgeInfinity};
    values[v] = std::move(seed);
    enqueue(v);
  }

  const auto adj = g.out_edges_by_vertex();
  while (!queue.empty()) {
    const VertexId v = order == WorklistOrder::Fifo ? queue.front() : queue.back();
    if (order == WorklistOrder::Fifo)
      queue.pop_front();
    else
      queue.pop_back();
    queued.erase(v);
    const AgeState src = values.at(v);
    for (const std::size_t i : adj[static_cast<std::size_t>(v)]) {
      const Edge& e = g.edges[i];
      AgeState next = e.is_access() ? age_update(src, e.block, assoc) : src;
      const auto it = values.find(e.dst);
      if (it == values.end()) {
        values.emplace(e.dst, std::move(next));
        enqueue(e.dst);
      } else {
        AgeState joined = age_join(it->second, next);
        if (!(joined == it->second)) {
          it->second = std::move(joined);
          enqueue(e.dst);
        }
      }
    }
  }
  return values;
}

std::map<EdgeId, Classification> classify_by_age(const ControlFlowGraph& g, const CacheConfig& config,
                                                 WorklistOrder order) {
  std::map<EdgeId, Classification> out;
  for (int set = 0; set < config.num_sets; ++set) {
    const bool any = std::any_of(g.edges.begin(), g.edges.end(), [&](const Edge& e) {
      return e.is_access() && g.block_set(e.block) == set;
    });
    if (!any) continue;
    const ControlFlowGraph sliced = config.num_sets == 1 ? g : slice_for_set(g, set);
    const auto values = age_fixpoint(sliced, config, order);
    for (const Edge& e : sliced.edges) {
      if (!e.is_access()) continue;
      const auto it = values.find(e.src);
      if (it == values.end()) continue;  // unreachable
      const AgeInterval iv = it->second.get(e.block);
      out[e.id] = iv.definitely_cached(config.associativity) ? Classification::AlwaysHit
                  : iv.definitely_absent()                   ? Classification::AlwaysMiss
                                                             : Classification::Unknown;
    }
  }
  return out;
}

}  // namespace lrux
