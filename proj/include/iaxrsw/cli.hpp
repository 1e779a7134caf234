#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iaxrsw {

// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailed = 1,      // quality gate failed (sim, sweep) or decode error (parse)
    kExitConfigError = 2, // bad flags, config file or values
    kExitIoFailure = 3,
    kExitRuntimeError = 4, // e.g. relay could not bind
};

/// Entry point for `iaxrsw <subcommand> ...`. `args` excludes the program
/// name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace iaxrsw
