#include "lrux/cfg.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace lrux {

void CacheConfig::validate() const {
  if (associativity < 1) throw std::invalid_argument("associativity must be >= 1");
  if (num_sets < 1) throw std::invalid_argument("number of sets must be >= 1");
  if (line_size < 1 || (line_size & (line_size - 1)) != 0)
    throw std::invalid_argument("line size must be a positive power of two");
}

AddressMapping map_address(unsigned long long address, const CacheConfig& config) {
  config.validate();
  const auto block = static_cast<long long>(address / static_cast<unsigned long long>(config.line_size));
  return {block, static_cast<int>(block % config.num_sets)};
}

bool ControlFlowGraph::has_vertex(VertexId v) const {
  return std::binary_search(vertices.begin(), vertices.end(), v);
}

std::vector<BlockId> ControlFlowGraph::access_blocks() const {
  std::set<BlockId> seen;
  for (const Edge& e : edges)
    if (e.is_access()) seen.insert(e.block);
  return {seen.begin(), seen.end()};
}

std::vector<std::vector<std::size_t>> ControlFlowGraph::out_edges_by_vertex() const {
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return edges[a].id < edges[b].id; });
  std::vector<std::vector<std::size_t>> adj(vertex_names.size());
  for (std::size_t i : order) adj[static_cast<std::size_t>(edges[i].src)].push_back(i);
  return adj;
}

std::optional<VertexId> ControlFlowGraph::vertex_id(const std::string& name) const {
  for (std::size_t i = 0; i < vertex_names.size(); ++i)
    if (vertex_names[i] == name) return static_cast<VertexId>(i);
  return std::nullopt;
}

std::optional<EdgeId> ControlFlowGraph::find_edge(const std::string& src, const std::string& dst,
                                                  const std::string& block) const {
  for (const Edge& e : edges) {
    if (vertex_name(e.src) != src || vertex_name(e.dst) != dst) continue;
    if (block == "-" ? e.is_access() : (!e.is_access() || block_name(e.block) != block)) continue;
    return e.id;
  }
  return std::nullopt;
}

void ControlFlowGraph::check_invariants() const {
  std::set<EdgeId> ids;
  for (const Edge& e : edges) {
    if (!ids.insert(e.id).second) throw std::logic_error("duplicate edge id");
    if (!has_vertex(e.src) || !has_vertex(e.dst)) throw std::logic_error("edge endpoint is not a live vertex");
    if (e.is_access() && static_cast<std::size_t>(e.block) >= block_table.size())
      throw std::logic_error("edge block out of range");
    if (starts.count(e.dst)) throw std::logic_error("edge into a start vertex");
  }
  for (const auto& [v, kind] : starts) {
    (void)kind;
    if (!has_vertex(v)) throw std::logic_error("start vertex is not live");
  }
  if (!std::is_sorted(vertices.begin(), vertices.end())) throw std::logic_error("vertex list not sorted");
}

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string text;
  int column = 1;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return false;
  return true;
}

long long parse_integer(const std::string& s, int line, int column, const std::string& what) {
  try {
    std::size_t used = 0;
    const int base = s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X') ? 16 : 10;
    long long v = std::stoll(s, &used, base);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("malformed " + what + " '" + s + "'", line, column);
  }
}

struct Builder {
  ControlFlowGraph g;
  std::unordered_map<std::string, VertexId> vertex_ids;
  std::unordered_map<std::string, BlockId> block_ids;

  VertexId vertex(const std::string& name) {
    auto it = vertex_ids.find(name);
    if (it != vertex_ids.end()) return it->second;
    const auto id = static_cast<VertexId>(g.vertex_names.size());
    g.vertex_names.push_back(name);
    vertex_ids.emplace(name, id);
    return id;
  }

  BlockId block(const std::string& name, int set_index) {
    auto it = block_ids.find(name);
    if (it != block_ids.end()) return it->second;
    const auto id = static_cast<BlockId>(g.block_table.size());
    g.block_table.push_back({name, set_index});
    block_ids.emplace(name, id);
    return id;
  }
};

}  // namespace

ParsedProgram parse_cfg(std::istream& in, const ParseOverrides& overrides) {
  Builder b;
  std::optional<int> file_assoc, file_sets, file_linesize;
  bool saw_edge = false;
  std::set<EdgeId> used_ids;
  EdgeId next_implicit_id = 0;
  std::string line;
  int lineno = 0;

  const auto effective = [&](int then_line, int then_col) -> CacheConfig {
    CacheConfig c;
    c.associativity = overrides.associativity.value_or(file_assoc.value_or(0));
    c.num_sets = overrides.num_sets.value_or(file_sets.value_or(0));
    c.line_size = overrides.line_size.value_or(file_linesize.value_or(0));
    if (c.associativity == 0 || c.num_sets == 0 || c.line_size == 0)
      throw ParseError("cache configuration incomplete (need assoc, sets and linesize before labels)", then_line,
                       then_col);
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), then_line, then_col);
    }
    return c;
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string& head = tokens[0].text;

    if (head == "cache") {
      if (saw_edge) throw ParseError("cache line must precede edges", lineno, tokens[0].column);
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        const std::string& t = tokens[i].text;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value, got '" + t + "'", lineno, tokens[i].column);
        const std::string key = t.substr(0, eq);
        const long long value = parse_integer(t.substr(eq + 1), lineno, tokens[i].column, "cache parameter");
        if (key == "assoc")
          file_assoc = static_cast<int>(value);
        else if (key == "sets")
          file_sets = static_cast<int>(value);
        else if (key == "linesize")
          file_linesize = static_cast<int>(value);
        else
          throw ParseError("unknown cache parameter '" + key + "'", lineno, tokens[i].column);
      }
    } else if (head == "start") {
      if (tokens.size() != 3) throw ParseError("expected 'start <vertex> empty|top'", lineno, tokens[0].column);
      if (!is_identifier(tokens[1].text)) throw ParseError("malformed vertex name", lineno, tokens[1].column);
      const VertexId v = b.vertex(tokens[1].text);
      StartKind kind;
      if (tokens[2].text == "empty")
        kind = StartKind::EmptyCache;
      else if (tokens[2].text == "top")
        kind = StartKind::TopCache;
      else
        throw ParseError("start kind must be 'empty' or 'top'", lineno, tokens[2].column);
      if (!b.g.starts.emplace(v, kind).second)
        throw ParseError("duplicate start declaration for '" + tokens[1].text + "'", lineno, tokens[1].column);
    } else if (head == "edge") {
      if (tokens.size() != 4 && tokens.size() != 5)
        throw ParseError("expected 'edge <src> <dst> <label> [id=<n>]'", lineno, tokens[0].column);
      if (!is_identifier(tokens[1].text)) throw ParseError("malformed vertex name", lineno, tokens[1].column);
      if (!is_identifier(tokens[2].text)) throw ParseError("malformed vertex name", lineno, tokens[2].column);
      const VertexId src = b.vertex(tokens[1].text);
      const VertexId dst = b.vertex(tokens[2].text);

      BlockId block = kEpsilon;
      const std::string& label = tokens[3].text;
      if (label == "-") {
        // epsilon
      } else if (label[0] == '@') {
        const CacheConfig c = effective(lineno, tokens[3].column);
        const long long addr = parse_integer(label.substr(1), lineno, tokens[3].column, "address");
        if (addr < 0) throw ParseError("address must be non-negative", lineno, tokens[3].column);
        const AddressMapping m = map_address(static_cast<unsigned long long>(addr), c);
        std::ostringstream name;
        name << "@0x" << std::hex << m.block_number * c.line_size;
        block = b.block(name.str(), m.set_index);
      } else if (is_identifier(label)) {
        const CacheConfig c = effective(lineno, tokens[3].column);
        if (c.num_sets != 1)
          throw ParseError("symbolic block labels require sets=1", lineno, tokens[3].column);
        block = b.block(label, 0);
      } else {
        throw ParseError("malformed label '" + label + "'", lineno, tokens[3].column);
      }

      EdgeId id;
      if (tokens.size() == 5) {
        const std::string& t = tokens[4].text;
        if (t.rfind("id=", 0) != 0) throw ParseError("expected id=<n>", lineno, tokens[4].column);
        id = parse_integer(t.substr(3), lineno, tokens[4].column, "edge id");
      } else {
        id = next_implicit_id;
      }
      if (!used_ids.insert(id).second)
        throw ParseError("duplicate edge id " + std::to_string(id), lineno, tokens[0].column);
      while (used_ids.count(next_implicit_id)) ++next_implicit_id;
      b.g.edges.push_back({id, src, dst, block});
      saw_edge = true;
    } else {
      throw ParseError("unknown directive '" + head + "'", lineno, tokens[0].column);
    }
  }

  const CacheConfig config = effective(lineno + 1, 1);
  for (std::size_t i = 0; i < b.g.vertex_names.size(); ++i)
    b.g.vertices.push_back(static_cast<VertexId>(i));
  for (const Edge& e : b.g.edges)
    if (b.g.starts.count(e.dst))
      throw ParseError("edge into start vertex '" + b.g.vertex_name(e.dst) + "'", lineno + 1, 1);
  b.g.check_invariants();
  return {std::move(b.g), config};
}

ParsedProgram parse_cfg_string(const std::string& text, const ParseOverrides& overrides) {
  std::istringstream in(text);
  return parse_cfg(in, overrides);
}

ParsedProgram parse_cfg_file(const std::string& path, const ParseOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  return parse_cfg(in, overrides);
}

std::string write_cfg(const ControlFlowGraph& g, const CacheConfig& config) {
  std::ostringstream out;
  out << "cache assoc=" << config.associativity << " sets=" << config.num_sets
      << " linesize=" << config.line_size << "\n";
  for (const auto& [v, kind] : g.starts)
    out << "start " << g.vertex_name(v) << ' ' << (kind == StartKind::EmptyCache ? "empty" : "top") << "\n";
  std::vector<const Edge*> order;
  for (const Edge& e : g.edges) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const Edge* a, const Edge* b) { return a->id < b->id; });
  for (const Edge* e : order) {
    out << "edge " << g.vertex_name(e->src) << ' ' << g.vertex_name(e->dst) << ' '
        << (e->is_access() ? g.block_name(e->block) : "-") << " id=" << e->id << "\n";
  }
  return out.str();
}

ControlFlowGraph slice_for_set(const ControlFlowGraph& g, int set_index) {
  ControlFlowGraph out = g;
  for (Edge& e : out.edges)
    if (e.is_access() && g.block_set(e.block) != set_index) e.block = kEpsilon;
  return out;
}

ControlFlowGraph prune_unreachable(const ControlFlowGraph& g) {
  std::set<VertexId> reached;
  std::deque<VertexId> queue;
  for (const auto& [v, kind] : g.starts) {
    (void)kind;
    reached.insert(v);
    queue.push_back(v);
  }
  const auto adj = g.out_edges_by_vertex();
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (std::size_t i : adj[static_cast<std::size_t>(v)]) {
      const VertexId d = g.edges[i].dst;
      if (reached.insert(d).second) queue.push_back(d);
    }
  }
  ControlFlowGraph out = g;
  out.vertices.assign(reached.begin(), reached.end());
  std::erase_if(out.edges, [&](const Edge& e) { return reached.count(e.src) == 0; });
  return out;
}

ControlFlowGraph collapse_epsilon(const ControlFlowGraph& g) {
  ControlFlowGraph out = g;
  std::set<VertexId> live(out.vertices.begin(), out.vertices.end());

  const auto drop_vertex = [&](VertexId v) { live.erase(v); };

  bool changed = true;
  while (changed) {
    changed = false;

    // Epsilon self-loops and duplicate parallel epsilon edges never affect
    // the observable label sequences.
    std::set<std::pair<VertexId, VertexId>> eps_pairs;
    std::erase_if(out.edges, [&](const Edge& e) {
      if (e.is_access()) return false;
      if (e.src == e.dst) return true;
      return !eps_pairs.insert({e.src, e.dst}).second;
    });

    std::map<VertexId, std::vector<std::size_t>> ins, outs;
    for (std::size_t i = 0; i < out.edges.size(); ++i) {
      ins[out.edges[i].dst].push_back(i);
      outs[out.edges[i].src].push_back(i);
    }

    for (const VertexId v : std::vector<VertexId>(live.begin(), live.end())) {
      // Sole entry into v is an epsilon edge: everything reaching v also sits
      // at its source, so v's out-edges can be issued from there directly.
      const auto in_it = ins.find(v);
      if (!out.is_start(v) && in_it != ins.end() && in_it->second.size() == 1) {
        const Edge in_edge = out.edges[in_it->second[0]];
        if (!in_edge.is_access() && in_edge.src != v) {
          for (Edge& e : out.edges)
            if (e.src == v) e.src = in_edge.src;
          std::erase_if(out.edges, [&](const Edge& e) { return e == in_edge; });
          drop_vertex(v);
          changed = true;
          break;
        }
      }
      // Sole exit of v is an epsilon edge: any path through v must continue
      // to its target, so entries into v can be rerouted there.
      const auto out_it = outs.find(v);
      if (!out.is_start(v) && out_it != outs.end() && out_it->second.size() == 1) {
        const Edge out_edge = out.edges[out_it->second[0]];
        if (!out_edge.is_access() && out_edge.dst != v) {
          for (Edge& e : out.edges)
            if (e.dst == v) e.dst = out_edge.dst;
          std::erase_if(out.edges, [&](const Edge& e) { return e == out_edge; });
          drop_vertex(v);
          changed = true;
          break;
        }
      }
    }
  }

  out.vertices.assign(live.begin(), live.end());
  return out;
}

}  // namespace lrux
