#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace idensity::cli {

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Runs one experiment. `args` excludes the program name. The report goes to
// `out`; diagnostics go to `err`. Returns 0 on success, 1 when a requested
// property check fails, 2 on a usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace idensity::cli
