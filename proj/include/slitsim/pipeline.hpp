#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "slitsim/config.hpp"
#include "slitsim/verify.hpp"

namespace slitsim {

enum class Command { Intensity, Trajectories, Fringes, Cml, Verify, All };

/// Throws ConfigError for an unknown command name.
Command parse_command(std::string_view name);

struct PipelineSummary {
  std::vector<verify::CheckResult> checks;
  std::vector<std::string> artifacts;

  bool all_pass() const;
  /// One line per check, as written to summary.txt.
  std::string text() const;
};

/// Runs one command, writes its outputs under config.output.directory (plus
/// summary.txt) and returns the check results.
PipelineSummary run_pipeline(const ExperimentConfig& config, Command command);

}  // namespace slitsim
