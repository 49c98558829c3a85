#pragma once

#include "hvl/config.hpp"
#include "hvl/errors.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace hvl {

enum ExitCode : int {
    kExitPass = 0,
    kExitConfig = 1,
    kExitSolver = 2,
    kExitIdentity = 3,
    kExitRefusal = 4,
};

/// Exit code for an error kind: Config and Io -> 1, Refusal -> 4, the rest -> 2.
int exit_code_for(ErrorKind kind);

struct CommandOptions {
    /// solve | check | scan | fh | oracle
    std::string command;
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::string> format;
    /// Replaces every check and FH tolerance.
    std::optional<double> tolerance;
    /// Drops the origin term from the virial check.
    bool disable_extra_term = false;
};

struct CommandResult {
    int exit_code = kExitPass;
    /// Report text in the selected format.
    std::string document;
    std::string format = "json";
};

/// Runs a command on an already validated config. Errors are folded into the
/// document and the exit code; nothing is written.
CommandResult execute_command(const std::string& command, const RunConfig& config, const CommandOptions& options);

/// Full CLI path: loads the config, executes, writes the report to --out,
/// output.path or `out`, and prints a one-line JSON error object to `err`
/// on failure. Returns the exit code.
int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Scan worker count: HVL_THREADS when set (>= 1), hardware concurrency otherwise.
int scan_thread_count();

} // namespace hvl
