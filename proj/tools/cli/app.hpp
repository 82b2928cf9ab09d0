#pragma once

#include <ostream>

namespace fracvar::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kNotConverged = 3,
  kNumeric = 4,
};

/// Entry point of the fracvar tool. Results go to `out`, diagnostics to
/// `err`. Returns one of the ExitCode values.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracvar::cli
