#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrux {

using VertexId = std::int32_t;
using BlockId = std::int32_t;
using EdgeId = std::int64_t;

// Label of an edge that performs no memory access.
inline constexpr BlockId kEpsilon = -1;

enum class StartKind { EmptyCache, TopCache };

struct CacheConfig {
  int associativity = 0;  // ways per set
  int num_sets = 0;
  int line_size = 0;  // bytes, power of two

  void validate() const;  // throws std::invalid_argument
  friend bool operator==(const CacheConfig&, const CacheConfig&) = default;
};

struct Edge {
  EdgeId id = 0;
  VertexId src = 0;
  VertexId dst = 0;
  BlockId block = kEpsilon;

  bool is_access() const { return block != kEpsilon; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct BlockInfo {
  std::string name;
  int set_index = 0;
};

// Multigraph over program locations. Vertex and block ids index the name
// tables; `vertices` lists the live ids (pruning and collapsing drop entries
// but never renumber, so ids in edges stay valid).
struct ControlFlowGraph {
  std::vector<std::string> vertex_names;
  std::vector<VertexId> vertices;  // ascending
  std::map<VertexId, StartKind> starts;
  std::vector<Edge> edges;  // declaration order; ids unique
  std::vector<BlockInfo> block_table;

  const std::string& vertex_name(VertexId v) const { return vertex_names.at(static_cast<std::size_t>(v)); }
  const std::string& block_name(BlockId b) const { return block_table.at(static_cast<std::size_t>(b)).name; }
  int block_set(BlockId b) const { return block_table.at(static_cast<std::size_t>(b)).set_index; }
  bool is_start(VertexId v) const { return starts.count(v) != 0; }
  bool has_vertex(VertexId v) const;

  // Distinct blocks labelling at least one edge, ascending by id.
  std::vector<BlockId> access_blocks() const;
  // Per-vertex out-edge indices into `edges`, ordered by edge id.
  std::vector<std::vector<std::size_t>> out_edges_by_vertex() const;

  std::optional<VertexId> vertex_id(const std::string& name) const;
  std::optional<EdgeId> find_edge(const std::string& src, const std::string& dst, const std::string& block) const;

  void check_invariants() const;  // throws std::logic_error on violation
};

struct AddressMapping {
  long long block_number = 0;
  int set_index = 0;
  friend bool operator==(const AddressMapping&, const AddressMapping&) = default;
};

// block = address / lineSize, set = block mod numSets.
AddressMapping map_address(unsigned long long address, const CacheConfig& config);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// CLI overrides win over the `cache` header line.
struct ParseOverrides {
  std::optional<int> associativity;
  std::optional<int> num_sets;
  std::optional<int> line_size;
};

struct ParsedProgram {
  ControlFlowGraph graph;
  CacheConfig config;
};

// Text format, one directive per line, '#' starts a comment:
//   cache assoc=<N> sets=<S> linesize=<L>
//   start <vertex> empty|top
//   edge <src> <dst> <label> [id=<edgeId>]
// Label '-' is an epsilon edge, '@<addr>' (decimal or 0x hex) a memory
// address, and a bare identifier a symbolic block (requires sets=1).
ParsedProgram parse_cfg(std::istream& in, const ParseOverrides& overrides = {});
ParsedProgram parse_cfg_string(const std::string& text, const ParseOverrides& overrides = {});
ParsedProgram parse_cfg_file(const std::string& path, const ParseOverrides& overrides = {});

std::string write_cfg(const ControlFlowGraph& g, const CacheConfig& config);

// Relabels accesses of other sets to epsilon; vertices, edges and ids are
// preserved verbatim.
ControlFlowGraph slice_for_set(const ControlFlowGraph& g, int set_index);

// Forward-reachable subgraph from the start vertices.
ControlFlowGraph prune_unreachable(const ControlFlowGraph& g);

// Contracts epsilon edges where provably harmless: the label sequences
// observable from the starts are unchanged and every access edge keeps its
// id. Epsilon cycles that cannot be contracted are left in place.
ControlFlowGraph collapse_epsilon(const ControlFlowGraph& g);

}  // namespace lrux
