#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace circle_rope::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name). Output and
/// diagnostics go to the given streams; the return value is the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Locale-independent shortest-ish decimal with 15 significant digits.
std::string format_number(double value);

}  // namespace circle_rope::cli
