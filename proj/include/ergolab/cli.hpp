#pragma once

// Command-line front end. Exit codes: 0 ok, 1 tolerance failure,
// 2 parse/usage error, 3 budget refusal, 4 hypothesis failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace ergolab {

enum ExitCode : int {
  kExitOk = 0,
  kExitTolerance = 1,
  kExitParse = 2,
  kExitBudget = 3,
  kExitHypothesis = 4,
};

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ergolab
