#include "lrux/generators.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

namespace lrux {

namespace {

// Deterministic across platforms, unlike std::uniform_int_distribution.
std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

bool rand_chance(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

struct GraphBuilder {
  ControlFlowGraph g;
  EdgeId next_id = 0;

  VertexId vertex(const std::string& name) {
    const auto id = static_cast<VertexId>(g.vertex_names.size());
    g.vertex_names.push_back(name);
    g.vertices.push_back(id);
    return id;
  }
  BlockId block(const std::string& name) {
    const auto id = static_cast<BlockId>(g.block_table.size());
    g.block_table.push_back({name, 0});
    return id;
  }
  EdgeId edge(VertexId src, VertexId dst, BlockId b) {
    g.edges.push_back({next_id, src, dst, b});
    return next_id++;
  }
};

}  // namespace

void CnfFormula::validate() const {
  if (num_vars < 0) throw std::invalid_argument("negative variable count");
  for (const auto& clause : clauses) {
    if (clause.empty()) throw std::invalid_argument("empty clause");
    for (const int lit : clause)
      if (lit == 0 || std::abs(lit) > num_vars) throw std::invalid_argument("literal out of range");
  }
}

CnfFormula parse_dimacs(std::istream& in) {
  CnfFormula f;
  bool saw_header = false;
  std::vector<int> current;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, kind;
      int clause_count = 0;
      if (!(ls >> p >> kind >> f.num_vars >> clause_count) || kind != "cnf")
        throw std::invalid_argument("malformed DIMACS header");
      saw_header = true;
      continue;
    }
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (!current.empty()) f.clauses.push_back(std::exchange(current, {}));
      } else {
        current.push_back(lit);
      }
    }
  }
  if (!current.empty()) f.clauses.push_back(std::move(current));
  if (!saw_header) throw std::invalid_argument("missing DIMACS header");
  f.validate();
  return f;
}

bool satisfiable_by_truth_table(const CnfFormula& f, int max_vars) {
  f.validate();
  if (f.num_vars > max_vars) throw std::invalid_argument("formula too large for truth-table search");
  const std::uint64_t limit = std::uint64_t{1} << f.num_vars;
  for (std::uint64_t assignment = 0; assignment < limit; ++assignment) {
    bool all = true;
    for (const auto& clause : f.clauses) {
      bool sat = false;
      for (const int lit : clause) {
        const bool value = (assignment >> (std::abs(lit) - 1)) & 1;
        if (lit > 0 ? value : !value) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool UndirectedGraph::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return edges.count({u, v}) != 0;
}

void UndirectedGraph::validate() const {
  if (num_vertices < 1) throw std::invalid_argument("graph needs at least one vertex");
  for (const auto& [u, v] : edges)
    if (u < 0 || v < 0 || u >= v || v >= num_vertices) throw std::invalid_argument("bad edge");
}

UndirectedGraph parse_edge_list(std::istream& in) {
  UndirectedGraph g;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int u, v;
    if (!(ls >> u)) continue;
    if (!(ls >> v)) throw std::invalid_argument("edge list line needs two vertices");
    if (u == v) throw std::invalid_argument("self loops are not allowed");
    if (u > v) std::swap(u, v);
    g.edges.insert({u, v});
    g.num_vertices = std::max({g.num_vertices, u + 1, v + 1});
  }
  g.validate();
  return g;
}

bool has_hamiltonian_circuit(const UndirectedGraph& g, int max_vertices) {
  g.validate();
  if (g.num_vertices > max_vertices) throw std::invalid_argument("graph too large for permutation search");
  const int n = g.num_vertices;
  if (n == 1) return false;  // no self loops, so no circuit
  std::vector<int> perm(static_cast<std::size_t>(n) - 1);
  std::iota(perm.begin(), perm.end(), 1);
  do {
    bool ok = g.has_edge(0, perm.front()) && g.has_edge(perm.back(), 0);
    for (std::size_t i = 0; ok && i + 1 < perm.size(); ++i) ok = g.has_edge(perm[i], perm[i + 1]);
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

GeneratedInstance sat_to_cfg(const CnfFormula& f) {
  f.validate();
  GeneratedInstance out;
  GraphBuilder b;
  const int n = f.num_vars;

  const BlockId guard = b.block("w");
  std::vector<BlockId> pos(static_cast<std::size_t>(n) + 1), neg(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) {
    pos[static_cast<std::size_t>(i)] = b.block("v" + std::to_string(i));
    neg[static_cast<std::size_t>(i)] = b.block("nv" + std::to_string(i));
  }
  const auto literal_block = [&](int lit) {
    return lit > 0 ? pos[static_cast<std::size_t>(lit)] : neg[static_cast<std::size_t>(-lit)];
  };

  const VertexId start = b.vertex("entry");
  b.g.starts.emplace(start, StartKind::EmptyCache);
  VertexId cur = b.vertex("s0");
  b.edge(start, cur, guard);
  // one two-way switch per variable: choose a polarity
  for (int i = 1; i <= n; ++i) {
    const VertexId nxt = b.vertex("s" + std::to_string(i));
    b.edge(cur, nxt, pos[static_cast<std::size_t>(i)]);
    b.edge(cur, nxt, neg[static_cast<std::size_t>(i)]);
    cur = nxt;
  }
  // one k-way switch per clause: claim a satisfying literal
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    const VertexId nxt = b.vertex("c" + std::to_string(j + 1));
    for (const int lit : f.clauses[j]) b.edge(cur, nxt, literal_block(lit));
    cur = nxt;
  }
  const VertexId exit = b.vertex("exit");
  out.designated_edge = b.edge(cur, exit, guard);

  out.cfg = std::move(b.g);
  out.config = {n + 1, 1, 16};
  out.check = DesignatedCheck::MayHit;
  out.ground_truth = satisfiable_by_truth_table(f);
  return out;
}

GeneratedInstance hamiltonian_to_cfg(const UndirectedGraph& g) {
  g.validate();
  GeneratedInstance out;
  GraphBuilder b;
  const int n = g.num_vertices;

  const BlockId guard = b.block("w");
  std::vector<BlockId> blocks(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) blocks[static_cast<std::size_t>(i)] = b.block("b" + std::to_string(i));

  const VertexId start = b.vertex("entry");
  b.g.starts.emplace(start, StartKind::EmptyCache);
  const VertexId first = b.vertex("h0_0");
  b.edge(start, first, guard);

  // layer j holds the copies reachable after j steps; entering a copy of
  // vertex i accesses block i, so a circuit accesses n distinct blocks
  std::vector<std::vector<VertexId>> layer(static_cast<std::size_t>(n) + 1,
                                           std::vector<VertexId>(static_cast<std::size_t>(n), -1));
  layer[0][0] = first;
  for (int j = 1; j < n; ++j)
    for (int i = 1; i < n; ++i)
      layer[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          b.vertex("h" + std::to_string(i) + "_" + std::to_string(j));
  const VertexId last = b.vertex("h0_" + std::to_string(n));
  layer[static_cast<std::size_t>(n)][0] = last;

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const VertexId src = layer[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if (src < 0) continue;
      for (int k = 0; k < n; ++k) {
        const VertexId dst = layer[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(k)];
        if (dst < 0 || k == i || !g.has_edge(i, k)) continue;
        b.edge(src, dst, blocks[static_cast<std::size_t>(k)]);
      }
    }
  }
  const VertexId exit = b.vertex("exit");
  out.designated_edge = b.edge(last, exit, guard);

  out.cfg = std::move(b.g);
  out.config = {n, 1, 16};
  out.check = DesignatedCheck::MayMiss;
  out.ground_truth = has_hamiltonian_circuit(g);
  return out;
}

ControlFlowGraph diamond_chain(int n) {
  if (n < 0) throw std::invalid_argument("diamond count must be non-negative");
  GraphBuilder b;
  const BlockId a = b.block("a");
  const VertexId start = b.vertex("d0");
  b.g.starts.emplace(start, StartKind::EmptyCache);
  VertexId cur = b.vertex("d1");
  b.edge(start, cur, a);
  for (int i = 1; i <= n; ++i) {
    const VertexId nxt = b.vertex("d" + std::to_string(i + 1));
    b.edge(cur, nxt, b.block("b" + std::to_string(i)));
    b.edge(cur, nxt, kEpsilon);
    cur = nxt;
  }
  return std::move(b.g);
}

ControlFlowGraph random_cfg(const RandomCfgParams& params, std::uint64_t seed) {
  if (params.vertices < 1 || params.blocks < 1) throw std::invalid_argument("need at least one vertex and block");
  std::mt19937_64 rng(seed);
  GraphBuilder b;
  std::vector<BlockId> pool(static_cast<std::size_t>(params.blocks));
  for (int i = 0; i < params.blocks; ++i) pool[static_cast<std::size_t>(i)] = b.block("m" + std::to_string(i));

  const VertexId start = b.vertex("x0");
  b.g.starts.emplace(start, rand_chance(rng, params.top_bias) ? StartKind::TopCache : StartKind::EmptyCache);
  for (int i = 1; i < params.vertices; ++i) b.vertex("x" + std::to_string(i));

  const auto label = [&]() -> BlockId {
    if (rand_chance(rng, 0.15)) return kEpsilon;
    return pool[rand_below(rng, pool.size())];
  };

  // spanning arborescence keeps every vertex reachable from the start
  for (int i = 1; i < params.vertices; ++i)
    b.edge(static_cast<VertexId>(rand_below(rng, static_cast<std::uint64_t>(i))), static_cast<VertexId>(i), label());

  const auto target_edges = static_cast<int>(params.edge_density * params.vertices);
  for (int i = params.vertices - 1; i < target_edges; ++i) {
    if (params.vertices < 2) break;
    const auto src = static_cast<VertexId>(rand_below(rng, static_cast<std::uint64_t>(params.vertices)));
    // never into the start
    const auto dst = static_cast<VertexId>(1 + rand_below(rng, static_cast<std::uint64_t>(params.vertices - 1)));
    b.edge(src, dst, label());
  }
  return std::move(b.g);
}

CnfFormula random_cnf(int max_vars, int max_clauses, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CnfFormula f;
  f.num_vars = 1 + static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(max_vars)));
  const int clauses = 1 + static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(max_clauses)));
  for (int j = 0; j < clauses; ++j) {
    std::vector<int> clause;
    const int width = 1 + static_cast<int>(rand_below(rng, 3));
    for (int k = 0; k < width; ++k) {
      const int var = 1 + static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(f.num_vars)));
      clause.push_back(rand_chance(rng, 0.5) ? var : -var);
    }
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

UndirectedGraph random_graph(int max_vertices, double edge_prob, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  UndirectedGraph g;
  g.num_vertices = 2 + static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(max_vertices - 1)));
  for (int u = 0; u < g.num_vertices; ++u)
    for (int v = u + 1; v < g.num_vertices; ++v)
      if (rand_chance(rng, edge_prob)) g.edges.insert({u, v});
  return g;
}

}  // namespace lrux
