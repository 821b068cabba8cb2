#include "lrux/exact.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <mutex>
#include <thread>

namespace lrux {

namespace {

struct MissValue {
  MissTag tag = MissTag::Bottom;
  Zdd antichain;  // meaningful when tag == Antichain

  friend bool operator==(const MissValue&, const MissValue&) = default;
};

void check_deadline(const ExactOptions& options) {
  if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) throw DeadlineExceeded();
}

}  // namespace

BlockResult analyze_block(const ControlFlowGraph& g, BlockId focus, int associativity,
                          const ExactOptions& options) {
  ZddManager mgr;
  const auto assoc = static_cast<std::uint32_t>(associativity);

  // Variable order: first occurrence of a block label in edge-id order.
  std::map<BlockId, ZddManager::Var> var_of;
  std::vector<BlockId> block_of;
  {
    std::vector<const Edge*> order;
    for (const Edge& e : g.edges)
      if (e.is_access()) order.push_back(&e);
    std::sort(order.begin(), order.end(), [](const Edge* a, const Edge* b) { return a->id < b->id; });
    for (const Edge* e : order)
      if (var_of.emplace(e->block, static_cast<ZddManager::Var>(block_of.size())).second)
        block_of.push_back(e->block);
  }
  if (!var_of.count(focus)) throw std::invalid_argument("focus block does not occur in the graph");

  const std::size_t n_vertices = g.vertex_names.size();
  std::vector<Zdd> hit(n_vertices, mgr.bottom());
  std::vector<MissValue> miss(n_vertices);

  BlockResult result;
  result.focus = focus;

  std::deque<VertexId> queue;
  std::vector<char> queued(n_vertices, 0);
  const auto enqueue = [&](VertexId v) {
    if (!queued[static_cast<std::size_t>(v)]) {
      queued[static_cast<std::size_t>(v)] = 1;
      queue.push_back(v);
    }
  };

  const auto join_into = [&](VertexId v, Zdd h, const MissValue& m) {
    const auto idx = static_cast<std::size_t>(v);
    bool grew = false;
    const Zdd joined_hit = mgr.min_union(hit[idx], h);
    if (!(joined_hit == hit[idx])) {
      hit[idx] = joined_hit;
      ++result.hit_updates[v];
      grew = true;
    }
    MissValue joined = miss[idx];
    if (m.tag == MissTag::Top || miss[idx].tag == MissTag::Top)
      joined = {MissTag::Top, Zdd{}};
    else if (miss[idx].tag == MissTag::Bottom)
      joined = m;
    else if (m.tag != MissTag::Bottom)
      joined = {MissTag::Antichain, mgr.max_union(miss[idx].antichain, m.antichain)};
    if (!(joined == miss[idx])) {
      miss[idx] = joined;
      ++result.miss_updates[v];
      grew = true;
    }
    if (grew) enqueue(v);
  };

  for (const auto& [v, kind] : g.starts) {
    const Zdd h = kind == StartKind::EmptyCache ? mgr.bottom() : mgr.unit();
    join_into(v, h, {MissTag::Top, Zdd{}});
  }
  // An access to the focus yields a fixed post-state, whatever held before.
  for (const Edge& e : g.edges)
    if (e.is_access() && e.block == focus) join_into(e.dst, mgr.unit(), {MissTag::Antichain, mgr.unit()});

  const auto adj = g.out_edges_by_vertex();
  while (!queue.empty()) {
    check_deadline(options);
    const VertexId v = options.order == WorklistOrder::Fifo ? queue.front() : queue.back();
    if (options.order == WorklistOrder::Fifo)
      queue.pop_front();
    else
      queue.pop_back();
    queued[static_cast<std::size_t>(v)] = 0;
    const auto idx = static_cast<std::size_t>(v);
    const Zdd h = hit[idx];
    const MissValue m = miss[idx];
    for (const std::size_t i : adj[idx]) {
      const Edge& e = g.edges[i];
      if (e.is_access() && e.block == focus) continue;  // constant, seeded above
      if (!e.is_access()) {
        join_into(e.dst, h, m);
        continue;
      }
      const ZddManager::Var var = var_of.at(e.block);
      // younger-sets that survive the access keep cardinality < assoc
      const Zdd h2 = mgr.truncate(mgr.add_element_min(h, var), assoc - 1);
      MissValue m2 = m;
      if (m.tag == MissTag::Antichain) {
        const Zdd grown = mgr.add_element_max(m.antichain, var);
        m2 = mgr.has_set_of_size_at_least(grown, assoc) ? MissValue{MissTag::Top, Zdd{}}
                                                        : MissValue{MissTag::Antichain, grown};
      }
      join_into(e.dst, h2, m2);
    }
  }

  for (const Edge& e : g.edges) {
    if (!e.is_access() || e.block != focus) continue;
    const auto idx = static_cast<std::size_t>(e.src);
    if (miss[idx].tag == MissTag::Bottom) continue;  // unreachable
    EdgeVerdict verdict;
    verdict.may_miss = miss[idx].tag == MissTag::Top;
    verdict.may_hit = !(hit[idx] == mgr.bottom());
    if (!verdict.may_hit && !verdict.may_miss)
      throw std::logic_error("reachable access edge with neither hit nor miss possible");
    result.verdicts[e.id] = verdict;
  }

  const auto materialize = [&](Zdd z) {
    BlockSetFamily family;
    for (const auto& member : mgr.enumerate(z)) {
      std::set<BlockId> s;
      for (const ZddManager::Var var : member) s.insert(block_of[var]);
      family.insert(std::move(s));
    }
    return family;
  };
  for (const VertexId v : g.vertices) {
    const auto idx = static_cast<std::size_t>(v);
    if (miss[idx].tag == MissTag::Bottom && hit[idx] == mgr.bottom()) continue;  // unreached
    result.max_antichain_size = std::max(result.max_antichain_size, mgr.count(hit[idx]));
    if (miss[idx].tag == MissTag::Antichain)
      result.max_antichain_size = std::max(result.max_antichain_size, mgr.count(miss[idx].antichain));
    if (options.keep_vertex_values) {
      VertexAbstract& va = result.values[v];
      va.may_hit = materialize(hit[idx]);
      va.miss_tag = miss[idx].tag;
      if (miss[idx].tag == MissTag::Antichain) va.may_miss = materialize(miss[idx].antichain);
    }
  }
  return result;
}

namespace {

struct Task {
  int set = 0;
  const ControlFlowGraph* sliced = nullptr;
  BlockId focus = 0;
};

std::vector<BlockResult> run_tasks(const std::vector<Task>& tasks, int associativity, const ExactOptions& exact,
                                   int jobs) {
  std::vector<BlockResult> results(tasks.size());
  if (jobs <= 1 || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i)
      results[i] = analyze_block(*tasks[i].sliced, tasks[i].focus, associativity, exact);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        results[i] = analyze_block(*tasks[i].sliced, tasks[i].focus, associativity, exact);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min<int>(jobs, static_cast<int>(tasks.size()));
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace

ExactClassification classify_exact(const ControlFlowGraph& g, const CacheConfig& config, ExactMode mode,
                                   const ClassifyOptions& options) {
  config.validate();
  ExactClassification out;

  std::vector<ControlFlowGraph> slices;  // keep alive for the task pointers
  slices.reserve(static_cast<std::size_t>(config.num_sets));
  std::vector<Task> tasks;

  for (int set = 0; set < config.num_sets; ++set) {
    std::set<BlockId> set_blocks;
    for (const Edge& e : g.edges)
      if (e.is_access() && g.block_set(e.block) == set) set_blocks.insert(e.block);
    if (set_blocks.empty()) continue;

    slices.push_back(config.num_sets == 1 ? g : slice_for_set(g, set));
    const ControlFlowGraph& sliced = slices.back();

    std::set<BlockId> refine = set_blocks;
    if (mode == ExactMode::AgePlusZdd) {
      const auto by_age = classify_by_age(sliced, config, options.exact.order);
      refine.clear();
      for (const Edge& e : sliced.edges) {
        if (!e.is_access()) continue;
        const auto it = by_age.find(e.id);
        if (it == by_age.end()) continue;
        out.by_age[e.id] = it->second;
        if (it->second == Classification::Unknown)
          refine.insert(e.block);
        else
          out.classes[e.id] = it->second;  // interval verdicts are kept
      }
    }
    for (const BlockId b : refine) {
      if (options.only_block && *options.only_block != b) continue;
      tasks.push_back({set, &sliced, b});
    }
  }

  if (options.only_block && mode == ExactMode::AgePlusZdd) {
    // restrict the reported age verdicts to the requested block
    std::erase_if(out.by_age, [&](const auto& kv) {
      const Edge* e = nullptr;
      for (const Edge& cand : g.edges)
        if (cand.id == kv.first) e = &cand;
      return e == nullptr || e->block != *options.only_block;
    });
    std::erase_if(out.classes, [&](const auto& kv) { return out.by_age.count(kv.first) == 0; });
  }

  const auto results = run_tasks(tasks, config.associativity, options.exact, options.jobs);
  for (const BlockResult& r : results) {
    for (const auto& [edge, verdict] : r.verdicts) {
      const Classification c = verdict.classification();
      out.by_zdd[edge] = c;
      if (!out.classes.count(edge)) out.classes[edge] = c;  // age verdicts win where present
    }
  }
  return out;
}

}  // namespace lrux
