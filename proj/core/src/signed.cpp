#include "tdac/signed.hpp"

#include <cmath>
#include <string>

#include "tdac/convert.hpp"
#include "tdac/error.hpp"

namespace tdac {

SignedTdacConfig::SignedTdacConfig(TdacConfig base, double gain_pos, double gain_neg,
                                   double baseline)
    : base_(std::move(base)), gain_pos_(gain_pos), gain_neg_(gain_neg), baseline_(baseline) {
  if (base_.bits() != kBits) {
    throw InputError("signed converter needs an 8-bit base configuration, got " +
                     std::to_string(base_.bits()));
  }
  if (!(gain_pos > 0.0) || !std::isfinite(gain_pos)) throw InputError("gain_pos must be positive");
  if (!(gain_neg > 0.0) || !std::isfinite(gain_neg)) throw InputError("gain_neg must be positive");
  if (!std::isfinite(baseline)) throw InputError("baseline must be finite");
}

SignedTdacConfig SignedTdacConfig::with_gains(double gain_pos, double gain_neg) const {
  return SignedTdacConfig(base_, gain_pos, gain_neg, baseline_);
}

SignMagnitude split_sign(const DigitalCode& code) {
  if (code.width() != SignedTdacConfig::kBits) {
    throw InputError("signed converter expects 8-bit codes, got " + std::to_string(code.width()));
  }
  return {code.bit(8), DigitalCode::from_string(code.to_string().substr(1))};
}

double convert_signed(const SignedTdacConfig& config, const DigitalCode& code) {
  const auto [positive, magnitude] = split_sign(code);
  const double v7 = convert_closed_form(config.magnitude_config(), magnitude);
  return positive ? config.baseline() + config.gain_pos() * v7
                  : config.baseline() - config.gain_neg() * v7;
}

TransferCurve signed_transfer_curve(const SignedTdacConfig& config) {
  TransferCurve curve{{}, config.base()};
  curve.entries.reserve(256);
  for (std::uint64_t c = 0; c < 256; ++c) {
    curve.entries.push_back({c, convert_signed(config, DigitalCode::from_value(8, c))});
  }
  return curve;
}

Waveform simulate_signed_leaky(const SignedTdacConfig& config, const LeakConfig& leak,
                               const DigitalCode& code, std::optional<double> t_end,
                               double dt_out) {
  const auto [positive, magnitude] = split_sign(code);
  const auto mag_config = config.magnitude_config();
  const double gain = positive ? config.gain_pos() : -config.gain_neg();
  const LeakyResponse response(mag_config, leak, magnitude, gain);
  const auto times =
      sample_times(mag_config, t_end.value_or(default_t_end(mag_config, leak)), dt_out);
  std::vector<Sample> samples;
  samples.reserve(times.size());
  for (double t : times) samples.push_back({t, config.baseline() + response(t)});
  return Waveform(std::move(samples));
}

}  // namespace tdac
