#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ellgw::app {

enum ExitCode : int { kExitOk = 0, kExitMathFailure = 1, kExitConfigError = 2 };

/// Parse the arguments (without the program name), run the job and write
/// the result. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ellgw::app
