#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rirsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitInfeasible = 3;

// Runs the command line (arguments without the program name) and returns the
// process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rirsim::cli
