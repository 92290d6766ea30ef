#pragma once

#include <iosfwd>

#include "run_config.hpp"

namespace pseudofrac::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kNotConverged = 3,
};

/// Executes one command. Artifacts go under config.out; `summary` receives a
/// single JSON line, `diag` the human-readable messages. Library errors map to
/// kUsage.
int run(const RunConfig& config, std::ostream& summary, std::ostream& diag);

/// parse_config + run with the same exit-code mapping as the binary.
int main_entry(int argc, const char* const* argv, std::ostream& summary, std::ostream& diag);

}  // namespace pseudofrac::cli
