#pragma once

#include <string>
#include <vector>

namespace ergodic::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,     ///< unreadable/invalid config, fatal validation, bad input files
    kNotConverged = 2,    ///< solver hit max_iterations
    kCheckFailed = 3,     ///< Monte Carlo cross-check or HJB verification failed
};

/// Runs `ergoctl` with the given arguments (args[0] is the program name).
int run(const std::vector<std::string>& args);

}  // namespace ergodic::cli
