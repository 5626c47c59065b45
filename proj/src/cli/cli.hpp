#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ptqfi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitInvariant = 3;

// Runs one invocation; `args` excludes the program name. Results go to `out`
// unless --out names a file (or a directory, for `figures`).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptqfi::cli
