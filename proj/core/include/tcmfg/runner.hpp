#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "tcmfg/report.hpp"
#include "tcmfg/scenario.hpp"

namespace tcmfg {

/// Exit status contract of a run.
enum ExitCode : int { exit_pass = 0, exit_check_failure = 1, exit_validation = 2, exit_divergence = 3 };

struct RunOptions {
    std::string out_dir;                // empty: no files written
    std::optional<RunMode> mode;        // overrides the scenario's mode
    std::optional<std::uint64_t> seed;  // overrides the scenario's seed
    bool force = false;                 // run despite fatal validation issues
};

struct RunResult {
    Report report;
    int exit_code = exit_pass;
    std::vector<ValidationIssue> issues;
};

/// Names of the verification suites understood by run_scenario.
const std::vector<std::string>& known_checks();

/// Validates, solves and runs the requested checks. Writes report.csv, residuals.csv,
/// timings.csv, binary trajectories and a manifest to out_dir when it is set.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options, std::ostream& log);

} // namespace tcmfg
