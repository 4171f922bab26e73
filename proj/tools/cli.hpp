#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crdsa::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kInfeasible = 3,
  kBadInput = 4,
};

/// Entry point of the `simulate` tool. CSV goes to `out` when no output
/// file is given; the resolved configuration and diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace crdsa::cli
