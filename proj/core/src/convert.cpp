#include "tdac/convert.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tdac/error.hpp"

namespace tdac {
namespace {

void require_width(const TdacConfig& config, const DigitalCode& code) {
  if (code.width() != config.bits()) {
    throw InputError("code has " + std::to_string(code.width()) + " bits, converter expects " +
                     std::to_string(config.bits()));
  }
}

}  // namespace

double drive_voltage(const TdacConfig& config, double t) {
  if (!(t >= 0.0)) throw InputError("drive voltage requested at negative time");
  return config.v_set() * std::exp(-t / config.tau2());
}

double slot_weight(const TdacConfig& config, int slot) {
  const double r = config.ratio();
  // exp(-k r) - exp(-(k+1) r) = exp(-k r) * (1 - exp(-r))
  return config.v_set() / config.c_out() * config.tau2() * std::exp(-slot * r) *
         -std::expm1(-r);
}

double convert_closed_form(const TdacConfig& config, const DigitalCode& code) {
  if (!config.scc().is_identity()) {
    throw UnsupportedConfig("closed-form conversion requires the identity drive characteristic");
  }
  require_width(config, code);
  const int q = config.bits();
  double sum = 0.0;
  for (int k = 0; k < q; ++k) {
    if (code.bit(q - k)) sum += slot_weight(config, k);
  }
  return sum;
}

double convert_quadrature(const TdacConfig& config, const DigitalCode& code, int steps_per_slot) {
  if (steps_per_slot < 16 || steps_per_slot % 2 != 0) {
    throw InputError("steps_per_slot must be even and >= 16, got " +
                     std::to_string(steps_per_slot));
  }
  require_width(config, code);
  const int q = config.bits();
  const double tw = config.pulse_width();
  const double h = tw / steps_per_slot;
  const auto& scc = config.scc();
  auto integrand = [&](double t) { return scc(drive_voltage(config, t)); };

  double total = 0.0;
  for (int k = 0; k < q; ++k) {
    if (!code.bit(q - k)) continue;
    const double a = k * tw;
    double odd = 0.0;
    double even = 0.0;
    for (int i = 1; i < steps_per_slot; ++i) {
      const double f = integrand(a + i * h);
      (i % 2 ? odd : even) += f;
    }
    const double s = integrand(a) + integrand((k + 1) * tw) + 4.0 * odd + 2.0 * even;
    total += s * h / 3.0;
  }
  return total / config.c_out();
}

RatioReport linearity_ratio(const TdacConfig& config, double rel_tol) {
  constexpr double ln2 = std::numbers::ln2;
  const double r = config.ratio();
  RatioClass c = RatioClass::AtLn2;
  if (std::abs(r - ln2) > rel_tol * ln2) c = r < ln2 ? RatioClass::BelowLn2 : RatioClass::AboveLn2;
  return {r, c};
}

const char* to_string(RatioClass c) {
  switch (c) {
    case RatioClass::BelowLn2: return "below-ln2";
    case RatioClass::AtLn2: return "at-ln2";
    case RatioClass::AboveLn2: return "above-ln2";
  }
  return "?";
}

}  // namespace tdac
