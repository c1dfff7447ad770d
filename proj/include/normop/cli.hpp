#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace normop::cli {

/// Exit codes: 0 the checked property holds, 1 it fails, 2 usage or input error.
inline constexpr int kHolds = 0;
inline constexpr int kFails = 1;
inline constexpr int kUsage = 2;

/// Runs one command line (args[0] is the program name). Reports go to `out`
/// unless --out is given; diagnostics and --verbose summaries go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace normop::cli
