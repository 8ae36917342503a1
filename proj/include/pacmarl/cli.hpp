#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pacmarl::cli {

// Exit codes: 0 success, 1 internal error, 2 validation error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;

// Runs the command line (args[0] is the program name) against the given
// streams. Subcommands: bounds, advise, generate, train, sweep, alpha.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pacmarl::cli
