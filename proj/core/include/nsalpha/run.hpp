#pragma once

#include "nsalpha/config.hpp"

namespace nsalpha {

// Executes one validated configuration and writes its artifacts under
// cfg.output_dir.  Exit codes: 0 success, 1 validation (thrown as
// ConfigError before this is reached), 2 solver failure, 3 verification
// failure.
int run(const RunConfig& cfg);

// Assembles the control problem a config describes (targets resolved from
// fixtures or snapshot files).  Exposed for tests and the sweep driver.
ControlProblem build_problem(const RunConfig& cfg);

}  // namespace nsalpha
