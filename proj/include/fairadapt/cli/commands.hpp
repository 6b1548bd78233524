#pragma once

// Subcommands of the fairadapt executable. Each returns the process exit
// code: 0 success, 1 domain or validation failure, 2 I/O or usage error.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fairadapt::cli {

enum class Format { Human, Ndjson };

struct Output {
  std::ostream& out;
  std::ostream& err;
  Format format = Format::Human;
  bool color = false;
};

int cmd_validate(const std::string& model_path, const Output& o);
int cmd_analyze(const std::string& model_path, const Output& o);

struct RunOptions {
  std::string model_path;
  std::string scenario_path;
  std::optional<std::string> trace_out;
  std::optional<std::string> world_out;
};

int cmd_run(const RunOptions& options, const Output& o);
int cmd_explain(const std::string& trace_path, const std::string& requirement, std::size_t iteration,
                const Output& o);

/// Parses arguments (argv[0] is the program name) and dispatches.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fairadapt::cli
