#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace copytrace {

/// Process exit codes of the `copytrace` tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitDomain = 2,   // unknown or empty document
    kExitStorage = 3,
};

/// Runs the `copytrace` command line; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace copytrace
