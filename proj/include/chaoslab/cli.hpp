#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chaoslab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitBudget = 3;

/// Run the command line tool. Reports go to `out` (unless --out is given
/// without --json); diagnostics go to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chaoslab::cli
