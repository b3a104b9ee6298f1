#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lolog::cli {

inline constexpr int kSchemaVersion = 1;

/// Runs the command line `args` (without the program name). Returns the
/// process exit code: 0 success, 1 user error, 2 numerical failure or, with
/// --strict, non-convergence.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lolog::cli
