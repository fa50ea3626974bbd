#pragma once

// Run configuration for the gpd tool: JSON in, validated struct out, and back.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gpd/bath.hpp"
#include "gpd/spin_core.hpp"

namespace gpd::cli {

/// Validation failure. `path` is the dotted field path ("bath.eta"), `line` the 1-based
/// line in the source document (0 when unknown), `file` the document name if known.
/// what() reads "file:line: path: message".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, int line, std::string message, std::string file = {});
  const std::string& path() const { return path_; }
  int line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::string path_;
  int line_;
  std::string message_;
};

enum class Mode { Exact, Adiabatic, Nonadiabatic, Density, Oracle, Fig2, Fig3 };
std::string to_string(Mode m);
std::optional<Mode> parse_mode(const std::string& s);

struct FieldConfig {
  double B_hz = 50e6;  // B / 2 pi in Hz; sets the physical time scale only
  double theta = pi / 3;
  std::optional<double> omega0_over_B;  // |omega0| / B
  std::optional<double> period_s;       // alternative: T in seconds
  int rotation_sign = 1;

  /// |omega0|/B from whichever of omega0_over_B / period_s is set (default 0.01).
  double omega0_magnitude() const;
  /// Dimensionless field (B = 1) with signed omega0.
  FieldParams params() const;
  double B_rad_per_s() const { return two_pi * B_hz; }
  friend bool operator==(const FieldConfig&, const FieldConfig&) = default;
};

struct BathConfig {
  SpectrumKind kind = SpectrumKind::Ohmic;
  double eta = 0.3;
  double omega_c_over_B = 3.0;
  BathSpectrum spectrum() const { return BathSpectrum::make(kind, eta, omega_c_over_B); }
  friend bool operator==(const BathConfig&, const BathConfig&) = default;
};

struct SweepConfig {
  std::string name;  // theta | omega0_over_B | eta | omega_c_over_B
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  bool log_scale = false;
  std::vector<double> values() const;
  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct OutputConfig {
  std::string path;        // empty: stdout
  std::string format = "csv";
  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct DensityConfig {
  double a_re = 0.7071067811865476, a_im = 0.0;
  double b_re = 0.7071067811865476, b_im = 0.0;
  double t_max_over_tau = 5.0;
  int count = 101;
  friend bool operator==(const DensityConfig&, const DensityConfig&) = default;
};

struct Fig2Config {
  std::vector<double> omega_c_over_B{1.5, 2.5, 3.0};
  int theta_count = 181;
  friend bool operator==(const Fig2Config&, const Fig2Config&) = default;
};

struct Fig3Config {
  std::vector<double> omega0_over_B{0.01, 0.2, 1.0, 5.0};
  int theta_count = 181;
  friend bool operator==(const Fig3Config&, const Fig3Config&) = default;
};

struct OracleConfig {
  int steps_per_period = 10000;  // ODE step T / steps_per_period ...
  double max_step = 0.01;        // ... capped at max_step / B
  double ode_tolerance = 1e-8;
  double aa_tolerance = 1e-6;
  // Truncated-bath check.
  double theta = pi / 3;
  double omega0_over_B = 0.02;
  double eta = 0.01;
  double omega_c_over_B = 3.0;
  int modes = 400;
  double t_final = 300.0;  // units of 1/B
  double dt = 0.02;
  double fit_t_min = 5.0;
  double width_tolerance = 0.10;  // relative
  double shift_tolerance = 0.15;  // relative
  double zero_coupling_tolerance = 1e-10;  // absolute, used when eta = 0
  friend bool operator==(const OracleConfig&, const OracleConfig&) = default;
};

struct RunConfig {
  std::optional<Mode> mode;
  FieldConfig field;
  BathConfig bath;
  std::optional<SweepConfig> sweep;
  OutputConfig output;
  DensityConfig density;
  Fig2Config fig2;
  Fig3Config fig3;
  OracleConfig oracle;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates a JSON document. Throws ConfigError with a field path and, where
/// possible, the source line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Full normalised form (every field present). parse_config(dump(to_json(c))) == c.
nlohmann::ordered_json to_json(const RunConfig& config);

/// Mode-specific checks (for example a rotation rate is needed for a period).
void validate_for(const RunConfig& config, Mode mode);

}  // namespace gpd::cli
