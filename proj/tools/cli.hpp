#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ordpat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitEstimator = 3;

/// Runs the command line with `args` (args[0] is the program name) and
/// returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ordpat::cli
