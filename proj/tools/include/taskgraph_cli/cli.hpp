#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace taskgraph::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNumericalError = 2;

/// Runs one `taskgraph` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace taskgraph::cli
