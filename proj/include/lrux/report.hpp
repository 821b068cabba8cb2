#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrux/cfg.hpp"
#include "lrux/exact.hpp"
#include "lrux/oracle.hpp"

namespace lrux {

enum class AnalysisMode { Age, Zdd, AgeZdd, Oracle };

std::string to_string(AnalysisMode mode);
AnalysisMode analysis_mode_from_string(const std::string& s);

struct ReportEdge {
  EdgeId id = 0;
  std::string src;
  std::string dst;
  std::string block;
  int32_t set = 0;
  Classification verdict = Classification::Unknown;
  std::optional<Classification> by_age;    // only in combined mode
  std::optional<Classification> by_exact;  // only for edges the refinement ran on

  bool operator==(const ReportEdge&) const = default;
};

struct Report {
  CacheConfig config{};
  AnalysisMode mode = AnalysisMode::AgeZdd;
  std::vector<ReportEdge> edges;  // ascending by edge id
  std::map<std::string, int> summary;
  double elapsed_ms = 0.0;

  bool operator==(const Report&) const = default;
};

std::string to_json(const Report& report);
Report report_from_json(const std::string& text);
std::string to_csv(const Report& report);

struct RunOptions {
  AnalysisMode mode = AnalysisMode::AgeZdd;
  WorklistOrder order = WorklistOrder::Fifo;
  int jobs = 1;
  std::optional<BlockId> only_block;
  OracleLimits oracle_limits{};
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

Report run_analysis(const ControlFlowGraph& g, const CacheConfig& config, const RunOptions& options);

}  // namespace lrux
