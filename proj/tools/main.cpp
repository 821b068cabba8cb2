#include <string>

#include "CLI11.hpp"
#include "lrux/commands.hpp"

namespace {

void add_override_flags(CLI::App* cmd, lrux::ParseOverrides& overrides) {
  cmd->add_option("--assoc", overrides.associativity, "override cache associativity");
  cmd->add_option("--sets", overrides.num_sets, "override cache set count");
  cmd->add_option("--linesize", overrides.line_size, "override cache line size");
}

constexpr const char* kModeHelp = "analysis mode: age | zdd | age+zdd";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact always-hit / always-miss classification for LRU caches"};
  app.require_subcommand(1);

  lrux::AnalyzeArgs analyze_args;
  std::string analyze_mode = "age+zdd";
  std::string analyze_order = "fifo";
  auto* analyze = app.add_subcommand("analyze", "classify every access edge of a program");
  analyze->add_option("input", analyze_args.input, "program file, or - for stdin")->required();
  add_override_flags(analyze, analyze_args.overrides);
  analyze->add_option("--mode", analyze_mode, kModeHelp)
      ->check(CLI::IsMember({"age", "zdd", "age+zdd"}));
  analyze->add_option("--order", analyze_order, "worklist discipline: fifo | lifo")
      ->check(CLI::IsMember({"fifo", "lifo"}));
  analyze->add_option("--format", analyze_args.format, "output format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  analyze->add_option("--jobs", analyze_args.jobs, "worker threads for the per-block analyses")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--focus", analyze_args.focus, "only classify edges accessing this block");
  analyze->add_option("--timeout", analyze_args.timeout_s, "give up after this many seconds");
  analyze->add_option("--out", analyze_args.out, "write the report here instead of stdout");

  lrux::OracleArgs oracle_args;
  std::string oracle_diff_mode = "age+zdd";
  auto* oracle = app.add_subcommand("oracle", "classify by explicit cache-state enumeration");
  oracle->add_option("input", oracle_args.input, "program file, or - for stdin")->required();
  add_override_flags(oracle, oracle_args.overrides);
  oracle->add_option("--guard", oracle_args.guard, "abort beyond this many tracked states");
  oracle->add_flag("--diff", oracle_args.diff, "compare against an abstract mode, exit 1 on mismatch");
  oracle->add_option("--diff-mode", oracle_diff_mode, kModeHelp)
      ->check(CLI::IsMember({"age", "zdd", "age+zdd"}));
  oracle->add_option("--format", oracle_args.format, "output format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  oracle->add_option("--timeout", oracle_args.timeout_s, "give up after this many seconds");
  oracle->add_option("--out", oracle_args.out, "write the report here instead of stdout");

  lrux::GenerateArgs generate_args;
  auto* generate = app.add_subcommand("generate", "emit benchmark programs");
  generate->add_option("kind", generate_args.kind, "sat | ham | diamond | random")
      ->required()
      ->check(CLI::IsMember({"sat", "ham", "diamond", "random"}));
  generate->add_option("--seed", generate_args.seed, "generator seed");
  generate->add_option("--out", generate_args.out_prefix, "output path prefix")->required();
  generate->add_option("--vars", generate_args.max_vars, "sat: variable budget");
  generate->add_option("--clauses", generate_args.max_clauses, "sat: clause budget");
  generate->add_option("--cnf", generate_args.cnf_file, "sat: DIMACS file instead of a random formula");
  generate->add_option("--vertices", generate_args.max_vertices, "ham: vertex budget");
  generate->add_option("--edge-prob", generate_args.edge_prob, "ham: edge probability");
  generate->add_option("--graph", generate_args.graph_file, "ham: edge-list file instead of a random graph");
  generate->add_option("--diamonds", generate_args.diamonds, "diamond: chain length");
  generate->add_option("--assoc", generate_args.assoc, "diamond/random: emitted associativity");
  generate->add_option("--cfg-vertices", generate_args.cfg_params.vertices, "random: vertex count");
  generate->add_option("--cfg-blocks", generate_args.cfg_params.blocks, "random: block count");
  generate->add_option("--density", generate_args.cfg_params.edge_density, "random: edges per vertex");
  generate->add_option("--top-bias", generate_args.cfg_params.top_bias,
                       "random: probability of an undefined-cache start");

  lrux::BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "time the analyses on the built-in suite");
  bench->add_option("--assoc", bench_args.assocs, "associativities to sweep");
  bench->add_option("--timeout", bench_args.timeout_s, "per-row timeout in seconds");
  bench->add_option("--out", bench_args.out, "write the CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  return lrux::run_command([&]() -> int {
    if (analyze->parsed()) {
      analyze_args.mode = lrux::analysis_mode_from_string(analyze_mode);
      analyze_args.order = analyze_order == "lifo" ? lrux::WorklistOrder::Lifo : lrux::WorklistOrder::Fifo;
      return lrux::cmd_analyze(analyze_args);
    }
    if (oracle->parsed()) {
      oracle_args.diff_mode = lrux::analysis_mode_from_string(oracle_diff_mode);
      return lrux::cmd_oracle(oracle_args);
    }
    if (generate->parsed()) return lrux::cmd_generate(generate_args);
    return lrux::cmd_bench(bench_args);
  });
}
