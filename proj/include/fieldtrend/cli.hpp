#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fieldtrend {

// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumerical = 3,
};

// args[0] is the program name. Results go to out, diagnostics to err; the
// only files touched are the ones named by --out / --output / --out-dir.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fieldtrend
