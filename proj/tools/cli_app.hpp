#pragma once

// Command-line front end: single solves, parameter sweeps, verification runs
// and the figure datasets.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmshell/material.hpp"
#include "rmshell/profile.hpp"

namespace rmshell::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kConfigError = 2,
  kIoError = 3,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { kSolve, kSweep, kVerify, kFigures };

using KeyValues = std::map<std::string, std::string>;

/// Every key accepted in a config file or as a --flag.
const std::vector<std::string>& known_keys();

struct RunConfig {
  Mode mode = Mode::kSolve;
  std::optional<double> g1, g2, g3, beta, lc_ratio, delta;
  double mu_M = 1.0;
  double r_o = 1.0;
  double mu_c = 0.0;
  double u_o = 1.0;
  std::size_t samples = 1001;
  std::optional<std::string> output;
  /// "2".."8" or "all".
  std::optional<std::string> figure;
  /// Unnormalized columns (r, u_r) instead of (r / r_o, u_r / U_o).
  bool raw = false;
  std::optional<std::string> sweep_key;
  std::vector<double> sweep_values;
  /// Test hook: multiply the solved C1 by 1.01 before verification.
  bool corrupt_c1 = false;

  /// The six dimensionless keys; throws ConfigError naming each missing one.
  DimensionlessSet<double> dimensionless() const;
};

/// `key = value` lines, `#` comments, blank lines ignored. Throws ConfigError
/// for malformed lines, duplicate keys and unknown keys.
KeyValues parse_key_values(std::istream& in, const std::string& source);

/// Throws ConfigError for unparsable values and missing mode-specific keys.
RunConfig build_config(const KeyValues& values);

/// Shortest round-trip decimal form.
std::string format_short(double v);
/// Scientific form with 17 significant digits.
std::string format_number(double v);

inline constexpr const char* kProfileHeader = "r_over_ro,u_r_over_Uo,P_rr,P_tt,Z,Y,u_r_classical_over_Uo,delta";
inline constexpr const char* kRawProfileHeader = "r,u_r,P_rr,P_tt,Z,Y,u_r_classical,delta";

/// One row per sample; the deviation column is nan when U_o = 0.
/// Normalized output throws NormalizationError when U_o = 0.
void write_profile_csv(std::ostream& out, const RadialProfile<double>& profile, bool raw);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& in);

/// Parses argv, runs the requested mode and returns the exit code. Reports
/// go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rmshell::cli
