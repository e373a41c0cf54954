#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gcpt::cli {

inline constexpr unsigned long long kDefaultSeed = 20240917ULL;

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

/// Runs one invocation of the command-line tool. `args` excludes the program
/// name. Machine-readable results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gcpt::cli
