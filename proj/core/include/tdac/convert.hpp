#pragma once

#include "tdac/code.hpp"
#include "tdac/config.hpp"

namespace tdac {

/// V_non(t) = V_set exp(-t / tau2). Throws InputError for t < 0.
double drive_voltage(const TdacConfig& config, double t);

/// Charge delivered to C_out by slot k (0-based, MSB first), per unit of the
/// bit value: (V_set / C_out) tau2 (exp(-k t_w/tau2) - exp(-(k+1) t_w/tau2)).
double slot_weight(const TdacConfig& config, int slot);

/// Leak-free output voltage, evaluated in closed form. Identity drive
/// characteristic only; throws UnsupportedConfig otherwise.
double convert_closed_form(const TdacConfig& config, const DigitalCode& code);

/// Leak-free output voltage by composite Simpson quadrature of
/// f_scc(V_non(t)) / C_out over each gated slot. steps_per_slot must be even
/// and >= 16. Works for any drive characteristic.
double convert_quadrature(const TdacConfig& config, const DigitalCode& code,
                          int steps_per_slot = 256);

enum class RatioClass { BelowLn2, AtLn2, AboveLn2 };

struct RatioReport {
  double ratio;
  RatioClass classification;
};

inline constexpr double kDefaultRatioTolerance = 1e-9;

/// t_w / tau2 classified against ln 2 with relative tolerance `rel_tol`.
RatioReport linearity_ratio(const TdacConfig& config,
                            double rel_tol = kDefaultRatioTolerance);

const char* to_string(RatioClass c);

}  // namespace tdac
