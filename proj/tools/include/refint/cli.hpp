#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace refint::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kInputError = 2,
  kPartial = 3,
};

// Entry point of the refint command line. args excludes the program name.
// Output that would go to --out goes to `out` when --out is not given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace refint::cli
