#include "lrux/commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "lrux/age.hpp"
#include "lrux/exact.hpp"
#include "lrux/oracle.hpp"

namespace lrux {

namespace {

ParsedProgram load_program(const std::string& input, const ParseOverrides& overrides) {
  if (input == "-") return parse_cfg(std::cin, overrides);
  return parse_cfg_file(input, overrides);
}

void emit(const std::string& text, const std::optional<std::string>& out) {
  if (!out) {
    std::cout << text;
    return;
  }
  std::ofstream f(*out);
  if (!f) throw std::invalid_argument("cannot open output file: " + *out);
  f << text;
}

std::optional<std::chrono::steady_clock::time_point> deadline_from(const std::optional<double>& timeout_s) {
  if (!timeout_s) return std::nullopt;
  if (*timeout_s <= 0) throw std::invalid_argument("timeout must be positive");
  return std::chrono::steady_clock::now() +
         std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(*timeout_s));
}

BlockId resolve_block(const ControlFlowGraph& g, const std::string& name) {
  for (std::size_t i = 0; i < g.block_table.size(); ++i)
    if (g.block_table[i].name == name) return static_cast<BlockId>(i);
  throw std::invalid_argument("unknown block: " + name);
}

std::string format_report(const Report& report, const std::string& format) {
  if (format == "json") return to_json(report);
  if (format == "csv") return to_csv(report);
  throw std::invalid_argument("unknown format: " + format);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot open output file: " + path);
  f << text;
}

}  // namespace

int cmd_analyze(const AnalyzeArgs& args) {
  const auto program = load_program(args.input, args.overrides);
  RunOptions options;
  options.mode = args.mode;
  options.order = args.order;
  options.jobs = args.jobs;
  options.deadline = deadline_from(args.timeout_s);
  if (args.focus) options.only_block = resolve_block(program.graph, *args.focus);
  const auto report = run_analysis(program.graph, program.config, options);
  emit(format_report(report, args.format), args.out);
  return kExitOk;
}

int cmd_oracle(const OracleArgs& args) {
  const auto program = load_program(args.input, args.overrides);
  OracleLimits limits;
  limits.max_states = args.guard;
  limits.deadline = deadline_from(args.timeout_s);

  if (!args.diff) {
    RunOptions options;
    options.mode = AnalysisMode::Oracle;
    options.oracle_limits = limits;
    const auto report = run_analysis(program.graph, program.config, options);
    emit(format_report(report, args.format), args.out);
    return kExitOk;
  }

  const auto truth = classify_by_oracle(program.graph, program.config, limits);
  RunOptions options;
  options.mode = args.diff_mode;
  options.deadline = limits.deadline;
  const auto report = run_analysis(program.graph, program.config, options);

  std::map<EdgeId, Classification> analysis;
  for (const auto& e : report.edges) analysis.emplace(e.id, e.verdict);

  const auto describe = [&](EdgeId id) {
    for (const auto& e : program.graph.edges)
      if (e.id == id)
        return program.graph.vertex_name(e.src) + " -" + program.graph.block_name(e.block) + "-> " +
               program.graph.vertex_name(e.dst);
    return std::string("?");
  };

  int mismatches = 0;
  for (const auto& [id, want] : truth) {
    const auto it = analysis.find(id);
    if (it == analysis.end()) {
      std::cerr << "edge " << id << " (" << describe(id) << "): missing from analysis\n";
      ++mismatches;
      continue;
    }
    const bool tolerated = args.diff_mode == AnalysisMode::Age && it->second == Classification::Unknown;
    if (it->second != want && !tolerated) {
      std::cerr << "edge " << id << " (" << describe(id) << "): oracle=" << to_string(want)
                << " analysis=" << to_string(it->second) << '\n';
      ++mismatches;
    }
  }
  for (const auto& [id, got] : analysis) {
    if (truth.count(id)) continue;
    std::cerr << "edge " << id << " (" << describe(id) << "): analysis=" << to_string(got)
              << " but oracle saw it as unreachable\n";
    ++mismatches;
  }

  std::ostringstream summary;
  summary << "compared " << truth.size() << " edges against " << to_string(args.diff_mode) << ": " << mismatches
          << " mismatch" << (mismatches == 1 ? "" : "es") << '\n';
  emit(summary.str(), args.out);
  return mismatches == 0 ? kExitOk : kExitDiff;
}

int cmd_generate(const GenerateArgs& args) {
  using nlohmann::ordered_json;
  if (args.out_prefix.empty()) throw std::invalid_argument("generate needs an output prefix");

  const auto write_instance = [&](const GeneratedInstance& inst, const std::string& kind) {
    write_file(args.out_prefix + ".cfg", write_cfg(inst.cfg, inst.config));
    ordered_json truth;
    truth["kind"] = kind;
    truth["check"] = inst.check == DesignatedCheck::MayHit ? "may-hit" : "may-miss";
    truth["designatedEdge"] = inst.designated_edge;
    truth["groundTruth"] = inst.ground_truth;
    truth["seed"] = args.seed;
    write_file(args.out_prefix + ".truth.json", truth.dump(2) + "\n");
    std::cout << args.out_prefix << ".cfg\n" << args.out_prefix << ".truth.json\n";
  };

  if (args.kind == "sat") {
    CnfFormula f;
    if (args.cnf_file) {
      std::ifstream in(*args.cnf_file);
      if (!in) throw std::invalid_argument("cannot open CNF file: " + *args.cnf_file);
      f = parse_dimacs(in);
    } else {
      f = random_cnf(args.max_vars, args.max_clauses, args.seed);
    }
    write_instance(sat_to_cfg(f), "sat");
  } else if (args.kind == "ham") {
    UndirectedGraph g;
    if (args.graph_file) {
      std::ifstream in(*args.graph_file);
      if (!in) throw std::invalid_argument("cannot open graph file: " + *args.graph_file);
      g = parse_edge_list(in);
    } else {
      g = random_graph(args.max_vertices, args.edge_prob, args.seed);
    }
    write_instance(hamiltonian_to_cfg(g), "ham");
  } else if (args.kind == "diamond") {
    const auto g = diamond_chain(args.diamonds);
    write_file(args.out_prefix + ".cfg", write_cfg(g, {args.assoc, 1, 16}));
    std::cout << args.out_prefix << ".cfg\n";
  } else if (args.kind == "random") {
    const auto g = random_cfg(args.cfg_params, args.seed);
    write_file(args.out_prefix + ".cfg", write_cfg(g, {args.assoc, 1, 16}));
    std::cout << args.out_prefix << ".cfg\n";
  } else {
    throw std::invalid_argument("unknown generator kind: " + args.kind);
  }
  return kExitOk;
}

int cmd_bench(const BenchArgs& args) {
  struct Benchmark {
    std::string name;
    ControlFlowGraph graph;
  };
  std::vector<Benchmark> suite;
  suite.push_back({"diamond20", diamond_chain(20)});
  for (int i = 1; i <= 3; ++i) {
    RandomCfgParams params;
    params.vertices = 10;
    params.blocks = 5;
    params.edge_density = 1.6;
    suite.push_back({"rand" + std::to_string(i), random_cfg(params, 100 + static_cast<std::uint64_t>(i))});
  }

  std::ostringstream csv;
  csv << "benchmark,mode,assoc,blocks,edges,timeMs,ah,am,hm,unknown\n";
  for (const auto& bench : suite) {
    int access_edges = 0;
    for (const auto& e : bench.graph.edges) access_edges += e.is_access() ? 1 : 0;
    for (const int assoc : args.assocs) {
      for (const auto mode : {AnalysisMode::Age, AnalysisMode::Zdd, AnalysisMode::AgeZdd}) {
        RunOptions options;
        options.mode = mode;
        options.deadline = deadline_from(args.timeout_s);
        try {
          const auto report = run_analysis(bench.graph, {assoc, 1, 16}, options);
          csv << bench.name << ',' << to_string(mode) << ',' << assoc << ',' << bench.graph.block_table.size()
              << ',' << access_edges << ',' << report.elapsed_ms << ',' << report.summary.at("always-hit") << ','
              << report.summary.at("always-miss") << ',' << report.summary.at("hit-and-miss") << ','
              << report.summary.at("unknown") << '\n';
        } catch (const DeadlineExceeded&) {
          std::cerr << "timeout: benchmark=" << bench.name << " mode=" << to_string(mode) << " assoc=" << assoc
                    << '\n';
        }
      }
    }
  }
  emit(csv.str(), args.out);
  return kExitOk;
}

int run_command(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ExplosionGuardExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitGuard;
  } catch (const DeadlineExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitTimeout;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace lrux
