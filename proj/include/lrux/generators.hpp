#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <utility>
#include <vector>

#include "lrux/cfg.hpp"

namespace lrux {

struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;  // DIMACS literals: +v / -v, 1-based

  void validate() const;  // throws std::invalid_argument
};

// 'c' comments, 'p cnf <vars> <clauses>' header, clauses terminated by 0.
CnfFormula parse_dimacs(std::istream& in);

// Exhaustive assignment search; refuses formulas beyond max_vars.
bool satisfiable_by_truth_table(const CnfFormula& f, int max_vars = 20);

struct UndirectedGraph {
  int num_vertices = 0;
  std::set<std::pair<int, int>> edges;  // normalized u < v, no self loops

  bool has_edge(int u, int v) const;
  void validate() const;
};

// Lines of "u v" pairs, '#' comments; vertex count is max index + 1.
UndirectedGraph parse_edge_list(std::istream& in);

// Fix vertex 0, enumerate permutations of the rest; refuses graphs beyond
// max_vertices.
bool has_hamiltonian_circuit(const UndirectedGraph& g, int max_vertices = 9);

enum class DesignatedCheck { MayHit, MayMiss };

struct GeneratedInstance {
  ControlFlowGraph cfg;
  CacheConfig config;
  EdgeId designated_edge = 0;
  DesignatedCheck check = DesignatedCheck::MayHit;
  bool ground_truth = false;
};

// Satisfiability as a may-hit question: a guard block is accessed, a switch
// chain picks one literal per variable and one per clause, and the guard is
// re-accessed with associativity num_vars + 1. The final access may hit iff
// the formula is satisfiable.
GeneratedInstance sat_to_cfg(const CnfFormula& f);

// Hamiltonicity as a may-miss question: a layered copy of the graph forces
// every path to perform one access per step, with associativity equal to the
// vertex count. The guard re-access may miss iff a circuit through vertex 0
// exists. Undirected edges contribute both directions.
GeneratedInstance hamiltonian_to_cfg(const UndirectedGraph& g);

// Start, an access to block a, then n two-way diamonds that either access a
// fresh block or skip past it.
ControlFlowGraph diamond_chain(int n);

struct RandomCfgParams {
  int vertices = 8;
  int blocks = 4;
  double edge_density = 1.5;  // target edges per vertex
  double top_bias = 0.3;      // probability of an undefined-cache start
};

// Deterministic for a given seed; one start, every vertex reachable.
ControlFlowGraph random_cfg(const RandomCfgParams& params, std::uint64_t seed);

CnfFormula random_cnf(int max_vars, int max_clauses, std::uint64_t seed);
UndirectedGraph random_graph(int max_vertices, double edge_prob, std::uint64_t seed);

}  // namespace lrux
