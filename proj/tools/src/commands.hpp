#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace padic_dbn::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDomain = 2, kCapExceeded = 3 };

// Parses argv (argv[0] is the program name) and runs one subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace padic_dbn::cli
