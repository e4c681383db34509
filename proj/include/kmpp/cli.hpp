#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kmpp {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitValidation = 3,
    kExitSizeLimit = 4,
    kExitIo = 5,
};

/// Entry point behind the `kmpp` executable. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kmpp
