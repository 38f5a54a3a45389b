#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tqkd::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitNoData = 3,
};

struct CommandOptions {
  std::string subcommand;
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<std::uint32_t> trace_frame;
  unsigned workers = 1;
  std::optional<double> mu_in;
  std::optional<double> level_db;
  std::optional<std::string> map_path;
};

/// Runs one subcommand. The summary JSON goes to `out`, diagnostics to `err`.
int run_command(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Parses the command line (argv[0] excluded) and dispatches.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tqkd::cli
