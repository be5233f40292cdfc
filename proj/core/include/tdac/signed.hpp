#pragma once

#include <optional>

#include "tdac/analysis.hpp"
#include "tdac/code.hpp"
#include "tdac/config.hpp"
#include "tdac/leaky.hpp"

namespace tdac {

/// Sign + 7 magnitude converter. B_8 selects the positive (1) or negative (0)
/// branch; B_7..B_1 are converted by the base drive in 7 slots.
class SignedTdacConfig {
 public:
  static constexpr int kBits = 8;

  /// base.bits() must be 8; gains must be positive.
  explicit SignedTdacConfig(TdacConfig base, double gain_pos = 1.0, double gain_neg = 1.0,
                            double baseline = 0.0);

  const TdacConfig& base() const { return base_; }
  double gain_pos() const { return gain_pos_; }
  double gain_neg() const { return gain_neg_; }
  double baseline() const { return baseline_; }

  /// The 7-slot configuration that converts the magnitude bits.
  TdacConfig magnitude_config() const { return base_.with_bits(kBits - 1); }

  SignedTdacConfig with_gains(double gain_pos, double gain_neg) const;

 private:
  TdacConfig base_;
  double gain_pos_;
  double gain_neg_;
  double baseline_;
};

struct SignMagnitude {
  bool positive;
  DigitalCode magnitude;  // 7 bits
};

/// Splits an 8-bit code; InputError on any other width.
SignMagnitude split_sign(const DigitalCode& code);

double convert_signed(const SignedTdacConfig& config, const DigitalCode& code);

TransferCurve signed_transfer_curve(const SignedTdacConfig& config);

/// Leaky simulation with the drive scaled by +gain_pos or -gain_neg. Sample
/// values include the baseline offset.
Waveform simulate_signed_leaky(const SignedTdacConfig& config, const LeakConfig& leak,
                               const DigitalCode& code, std::optional<double> t_end,
                               double dt_out);

}  // namespace tdac
