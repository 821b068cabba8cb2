#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lrux/cfg.hpp"
#include "lrux/generators.hpp"
#include "lrux/report.hpp"

namespace lrux {

// Process exit codes. Anything not listed maps to kExitInternal.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDiff = 1;
inline constexpr int kExitUsage = 2;  // parse errors and bad arguments
inline constexpr int kExitInternal = 3;
inline constexpr int kExitGuard = 4;
inline constexpr int kExitTimeout = 5;

struct AnalyzeArgs {
  std::string input;  // path, or "-" for stdin
  ParseOverrides overrides;
  AnalysisMode mode = AnalysisMode::AgeZdd;
  WorklistOrder order = WorklistOrder::Fifo;
  std::string format = "json";  // json | csv
  int jobs = 1;
  std::optional<std::string> focus;  // restrict the exact stage to one block
  std::optional<double> timeout_s;
  std::optional<std::string> out;  // path; stdout when absent
};

struct OracleArgs {
  std::string input;
  ParseOverrides overrides;
  std::uint64_t guard = 1'000'000;
  bool diff = false;  // compare against diff_mode, exit kExitDiff on mismatch
  AnalysisMode diff_mode = AnalysisMode::AgeZdd;
  std::string format = "json";
  std::optional<double> timeout_s;
  std::optional<std::string> out;
};

struct GenerateArgs {
  std::string kind;  // sat | ham | diamond | random
  std::uint64_t seed = 1;
  std::string out_prefix;
  // sat
  int max_vars = 6;
  int max_clauses = 8;
  std::optional<std::string> cnf_file;  // DIMACS input instead of a random formula
  // ham
  int max_vertices = 6;
  double edge_prob = 0.5;
  std::optional<std::string> graph_file;  // edge-list input instead of a random graph
  // diamond
  int diamonds = 8;
  // diamond and random share the emitted cache shape
  int assoc = 4;
  RandomCfgParams cfg_params;
};

struct BenchArgs {
  std::vector<int> assocs = {2, 4, 8, 16};
  double timeout_s = 10.0;
  std::optional<std::string> out;
};

int cmd_analyze(const AnalyzeArgs& args);
int cmd_oracle(const OracleArgs& args);
int cmd_generate(const GenerateArgs& args);
int cmd_bench(const BenchArgs& args);

// Maps escaped exceptions to exit codes and prints them to stderr.
int run_command(const std::function<int()>& body);

}  // namespace lrux
