#pragma once

#include <iosfwd>

namespace qsdc::cli {

enum ExitCode : int {
    kSuccess = 0,
    kConfigError = 2,
    kAborted = 3,
    kInternalError = 4,
};

/// Entry point for the `qsdc` tool: subcommands run, oracle, sweep, demo.
/// Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qsdc::cli
