#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rumor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line (args excludes the program name) and returns the
/// process exit code: 0 success, 1 runtime failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rumor::cli
