#include <unistd.h>

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "fairadapt/cli/commands.hpp"

namespace fairadapt::cli {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fairness requirements at runtime: validate, analyze, run and explain", "fairadapt"};
  app.require_subcommand(1);

  std::string format = "human";
  long seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"human", "ndjson"}));
  };

  std::string model_path, scenario_path, trace_path, requirement;
  std::size_t iteration = 0;
  RunOptions run_options;
  std::string trace_out, world_out;

  auto* validate = app.add_subcommand("validate", "Check a model file");
  validate->add_option("model", model_path, "Model file (.frm)")->required();
  add_common(validate);

  auto* analyze = app.add_subcommand("analyze", "Report static conflict edges");
  analyze->add_option("model", model_path, "Model file (.frm)")->required();
  add_common(analyze);

  auto* run = app.add_subcommand("run", "Run a scenario through the adaptation loop");
  run->add_option("model", model_path, "Model file (.frm)")->required();
  run->add_option("scenario", scenario_path, "Scenario file (.scn)")->required();
  run->add_option("--trace-out", trace_out, "Write the ndjson trace here");
  run->add_option("--world-out", world_out, "Write the final world here (ndjson)");
  run->add_option("--seed", seed, "Reserved; the engine is deterministic");
  add_common(run);

  auto* explain = app.add_subcommand("explain", "Explain a requirement's status at one iteration");
  explain->add_option("trace", trace_path, "Trace file written by run --trace-out")->required();
  explain->add_option("requirement", requirement, "Requirement id")->required();
  explain->add_option("iteration", iteration, "Iteration number")->required();
  add_common(explain);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "fairadapt: " << e.what() << "\n";
    return 2;
  }

  const char* color_env = std::getenv("FAIRADAPT_COLOR");
  bool color = &out == &std::cout && isatty(STDOUT_FILENO) && !(color_env && std::string(color_env) == "0");
  Output o{out, err, format == "ndjson" ? Format::Ndjson : Format::Human, color};

  if (*validate) return cmd_validate(model_path, o);
  if (*analyze) return cmd_analyze(model_path, o);
  if (*run) {
    run_options.model_path = model_path;
    run_options.scenario_path = scenario_path;
    if (!trace_out.empty()) run_options.trace_out = trace_out;
    if (!world_out.empty()) run_options.world_out = world_out;
    return cmd_run(run_options, o);
  }
  return cmd_explain(trace_path, requirement, iteration, o);
}

}  // namespace fairadapt::cli
