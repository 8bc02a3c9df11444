#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pollushield {

enum ExitCode : int {
    kExitOk = 0,
    kExitBadConfig = 1,
    kExitUnknownExperiment = 2,
    kExitOutputError = 3,
};

/// Entry point behind the `pollushield` binary. `args` excludes the program
/// name. Per-run summaries go to `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pollushield
