#pragma once

#include "pointwave/scenario.hpp"

#include <iosfwd>
#include <string>

namespace pointwave {

enum class Command { Validate, Classify, Simulate, PropagationTest };

/// Exit codes shared with the CLI so shell scripts can branch on the verdict.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 2;
inline constexpr int kExitBoundViolated = 3;

struct RunOptions {
    std::string out_dir;            // empty: no files, report to the stream only
    double step_override = -1.0;    // > 0 overrides the scenario step
    int quad_order_override = -1;   // > 0 overrides the scenario order
};

/// Executes one command against a parsed scenario. Writes the echoed
/// scenario (defaults materialized) plus the command's artifacts into
/// out_dir, reports human-readable text to `log`, and returns the exit code.
int run_command(Command cmd, const Scenario& scenario, const RunOptions& opts,
                std::ostream& log);

} // namespace pointwave
