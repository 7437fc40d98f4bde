#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fermient::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kDegenerateShape = 3,
};

/// Runs one invocation. `args` excludes the program name; `in` backs the
/// state-file argument "-".
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace fermient::cli
