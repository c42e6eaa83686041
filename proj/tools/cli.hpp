#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace genex::cli {

enum ExitCode : int { kOk = 0, kPartialFailure = 1, kUsageError = 2 };

/// Entry point for the `genex` command. `out` receives results when no --out
/// path is given, `err` receives diagnostics.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace genex::cli
