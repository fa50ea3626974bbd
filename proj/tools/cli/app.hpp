#pragma once

#include <iosfwd>

namespace gpd::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_validation = 1,
  exit_oracle_failure = 2,
  exit_singularity = 3,
};

/// Entry point shared by the gpd executable and the tests:
///   gpd <subcommand> --config <path> [--out <path>] [--format csv|json]
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gpd::cli
