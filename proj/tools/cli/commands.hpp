#pragma once

// Subcommand bodies. Each takes a validated RunConfig and returns its output table; the
// writers and exit-code mapping live in app.cpp.

#include <stdexcept>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "cli/table.hpp"

namespace gpd::cli {

/// A single-point run hit a divergence (cutoff resonance). Sweeps flag such rows
/// with status=cutoff_resonance instead.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Table cmd_exact(const RunConfig& config);
Table cmd_adiabatic(const RunConfig& config);
Table cmd_nonadiabatic(const RunConfig& config);
Table cmd_density(const RunConfig& config);
Table cmd_fig2(const RunConfig& config);
Table cmd_fig3(const RunConfig& config);

struct OracleCheck {
  std::string name;
  bool passed = false;
  double error = 0.0;
  double tolerance = 0.0;
  std::string error_kind;  // "absolute" or "relative"
  double wall_clock_s = 0.0;
  nlohmann::ordered_json details;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  double wall_clock_s = 0.0;
  bool passed() const;
  nlohmann::ordered_json to_json() const;
  Table to_table() const;
};

OracleReport cmd_oracle(const RunConfig& config);

}  // namespace gpd::cli
