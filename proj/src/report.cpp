#include "lrux/report.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "lrux/age.hpp"

namespace lrux {

std::string to_string(AnalysisMode mode) {
  switch (mode) {
    case AnalysisMode::Age: return "age";
    case AnalysisMode::Zdd: return "zdd";
    case AnalysisMode::AgeZdd: return "age+zdd";
    case AnalysisMode::Oracle: return "oracle";
  }
  throw std::logic_error("unhandled analysis mode");
}

AnalysisMode analysis_mode_from_string(const std::string& s) {
  if (s == "age") return AnalysisMode::Age;
  if (s == "zdd") return AnalysisMode::Zdd;
  if (s == "age+zdd") return AnalysisMode::AgeZdd;
  if (s == "oracle") return AnalysisMode::Oracle;
  throw std::invalid_argument("unknown analysis mode: " + s);
}

namespace {

using nlohmann::ordered_json;

ordered_json edge_to_json(const ReportEdge& e) {
  ordered_json j;
  j["id"] = e.id;
  j["src"] = e.src;
  j["dst"] = e.dst;
  j["block"] = e.block;
  j["set"] = e.set;
  j["class"] = to_string(e.verdict);
  if (e.by_age) j["byAge"] = to_string(*e.by_age);
  if (e.by_exact) j["byExact"] = to_string(*e.by_exact);
  return j;
}

ReportEdge edge_from_json(const ordered_json& j) {
  ReportEdge e;
  e.id = j.at("id").get<EdgeId>();
  e.src = j.at("src").get<std::string>();
  e.dst = j.at("dst").get<std::string>();
  e.block = j.at("block").get<std::string>();
  e.set = j.at("set").get<int32_t>();
  e.verdict = classification_from_string(j.at("class").get<std::string>());
  if (j.contains("byAge")) e.by_age = classification_from_string(j.at("byAge").get<std::string>());
  if (j.contains("byExact")) e.by_exact = classification_from_string(j.at("byExact").get<std::string>());
  return e;
}

}  // namespace

std::string to_json(const Report& report) {
  ordered_json j;
  j["cache"] = {{"assoc", report.config.associativity},
                {"sets", report.config.num_sets},
                {"linesize", report.config.line_size}};
  j["mode"] = to_string(report.mode);
  j["edges"] = ordered_json::array();
  for (const auto& e : report.edges) j["edges"].push_back(edge_to_json(e));
  j["summary"] = report.summary;
  j["elapsedMs"] = report.elapsed_ms;
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  Report r;
  r.config.associativity = j.at("cache").at("assoc").get<int32_t>();
  r.config.num_sets = j.at("cache").at("sets").get<int32_t>();
  r.config.line_size = j.at("cache").at("linesize").get<int32_t>();
  r.mode = analysis_mode_from_string(j.at("mode").get<std::string>());
  for (const auto& je : j.at("edges")) r.edges.push_back(edge_from_json(je));
  for (const auto& [key, value] : j.at("summary").items()) r.summary[key] = value.get<int>();
  r.elapsed_ms = j.at("elapsedMs").get<double>();
  return r;
}

std::string to_csv(const Report& report) {
  std::ostringstream out;
  out << "id,src,dst,block,set,class,byAge,byExact\n";
  for (const auto& e : report.edges) {
    out << e.id << ',' << e.src << ',' << e.dst << ',' << e.block << ',' << e.set << ','
        << to_string(e.verdict) << ',' << (e.by_age ? to_string(*e.by_age) : "") << ','
        << (e.by_exact ? to_string(*e.by_exact) : "") << '\n';
  }
  return out.str();
}

Report run_analysis(const ControlFlowGraph& g, const CacheConfig& config, const RunOptions& options) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  Report report;
  report.config = config;
  report.mode = options.mode;

  std::map<EdgeId, Classification> verdicts;
  std::map<EdgeId, Classification> by_age;
  std::map<EdgeId, Classification> by_exact;

  switch (options.mode) {
    case AnalysisMode::Age:
      verdicts = classify_by_age(g, config, options.order);
      break;
    case AnalysisMode::Oracle: {
      OracleLimits limits = options.oracle_limits;
      if (options.deadline) limits.deadline = options.deadline;
      verdicts = classify_by_oracle(g, config, limits);
      break;
    }
    case AnalysisMode::Zdd:
    case AnalysisMode::AgeZdd: {
      const auto mode = options.mode == AnalysisMode::Zdd ? ExactMode::ZddOnly : ExactMode::AgePlusZdd;
      ClassifyOptions copts;
      copts.exact.order = options.order;
      copts.exact.deadline = options.deadline;
      copts.jobs = options.jobs;
      copts.only_block = options.only_block;
      const auto result = classify_exact(g, config, mode, copts);
      verdicts = result.classes;
      if (mode == ExactMode::AgePlusZdd) {
        // in the pure exact mode the refinement columns would repeat `class`
        by_age = result.by_age;
        by_exact = result.by_zdd;
      }
      break;
    }
  }

  for (const auto& e : g.edges) {
    if (!e.is_access()) continue;
    const auto it = verdicts.find(e.id);
    if (it == verdicts.end()) continue;  // unreachable edges carry no verdict
    ReportEdge re;
    re.id = e.id;
    re.src = g.vertex_name(e.src);
    re.dst = g.vertex_name(e.dst);
    re.block = g.block_name(e.block);
    re.set = g.block_set(e.block);
    re.verdict = it->second;
    if (const auto a = by_age.find(e.id); a != by_age.end()) re.by_age = a->second;
    if (const auto z = by_exact.find(e.id); z != by_exact.end()) re.by_exact = z->second;
    report.edges.push_back(std::move(re));
  }

  report.summary = {{"always-hit", 0}, {"always-miss", 0}, {"hit-and-miss", 0}, {"unknown", 0}};
  for (const auto& e : report.edges) ++report.summary[to_string(e.verdict)];

  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace lrux
