#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qtangle::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageOrParse = 1,
    kToleranceFailure = 2,
    kInconsistent = 3,
};

/// Runs the command line `args` (args[0] is the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qtangle::cli
