#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mhc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the command line `args` (without the program name). Data goes to `out`
/// unless --out is given; diagnostics go to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mhc::cli
