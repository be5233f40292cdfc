#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdac/code.hpp"
#include "tdac/config.hpp"
#include "tdac/leaky.hpp"
#include "tdac/signed.hpp"

namespace tdac::cli {

using Settings = std::map<std::string, std::string>;

/// Bad command-line usage (exit status 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Transfer, Waveform, SweepRatio, SweepCode, Fit, Calibrate, Reproduce };

std::optional<ExperimentKind> parse_kind(std::string_view name);
const char* to_string(ExperimentKind kind);

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotConverged = 3;

/// Every key accepted in config files (section.name form).
const std::vector<std::string>& known_keys();

/// Typed view of a flat settings map. Unknown keys and unparsable values
/// are rejected.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Transfer;

  std::optional<int> q;
  std::optional<double> ratio;
  std::optional<double> pulse_width;
  double tau2 = 1.0;
  double v_set = 1.0;
  double c_out = 1.0;

  double tau1 = 1.0;
  double v0 = 0.0;

  bool is_signed = false;
  double gain_pos = 1.0;
  double gain_neg = 1.0;
  double baseline = 0.0;

  double dt_out = 0.01;
  std::optional<double> t_end;
  int steps_per_slot = 256;

  std::optional<std::string> code;
  std::string engine = "analytic";
  std::optional<std::string> model;
  std::optional<std::string> input;
  std::optional<std::string> figure;
  std::vector<double> ratios;
  std::vector<std::string> codes;
  std::optional<double> lo;
  std::optional<double> hi;

  std::filesystem::path out_dir = "tdac_out";

  static ExperimentConfig from_settings(const Settings& settings);

  /// Converter configuration; q falls back to `default_bits`.
  TdacConfig tdac_config(int default_bits) const;
  LeakConfig leak_config() const { return LeakConfig(tau1, v0); }
  SignedTdacConfig signed_config() const;

  /// Parses `code` (MSB-first string, or "ones"/"zeros" with q).
  DigitalCode parse_code(const std::string& text) const;
};

/// Runs one experiment, writing its summary to `out`. Returns the exit
/// status; throws tdac::Error for data errors and UsageError for misuse.
int run_experiment(const ExperimentConfig& config, std::ostream& out);

}  // namespace tdac::cli
