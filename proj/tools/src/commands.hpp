#pragma once

#include "run_config.hpp"

#include <ostream>

namespace qnlchain::cli {

enum ExitCode : int { Success = 0, CheckFailed = 1, Usage = 2, NumericalFailure = 3 };

/// Runs a validated configuration. CSV goes to config.output (or `out`),
/// diagnostics to `err`. Library errors are mapped to exit codes here.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qnlchain::cli
