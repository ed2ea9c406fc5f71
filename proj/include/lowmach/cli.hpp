#pragma once

#include <optional>
#include <string>

#include "lowmach/config.hpp"

namespace lowmach {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitFailure = 3 };

struct CliOptions {
  std::optional<std::string> out;
  bool force = false;
  std::optional<int> workers;
  std::optional<unsigned long long> seed;
  std::string save;  ///< solve only: write state.bin-format snapshot here
  std::string load;  ///< solve only: initial SplitState
};

/// Applies command-line overrides to a parsed config.
RunConfig apply_overrides(RunConfig config, const CliOptions& opts);

int cmd_solve(const RunConfig& config, const CliOptions& opts);
int cmd_sweep(const RunConfig& config, const CliOptions& opts);
int cmd_mms(const RunConfig& config, const CliOptions& opts);
int cmd_check(const RunConfig& config, const CliOptions& opts);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace lowmach
