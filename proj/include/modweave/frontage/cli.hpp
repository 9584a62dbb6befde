#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modweave {

// Exit codes of the command-line interface.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitUsage = 2,
  kExitRuntime = 3,
};

// Runs one command line (program name excluded). `in` backs the "-" file
// argument. `serve` blocks until the server stops.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            std::istream& in);

}  // namespace modweave
