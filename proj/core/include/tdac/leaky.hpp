#pragma once

#include <optional>
#include <vector>

#include "tdac/code.hpp"
#include "tdac/config.hpp"
#include "tdac/schedule.hpp"
#include "tdac/waveform.hpp"

namespace tdac {

/// Output node with a leak resistor: tau1 = C_out R_out, initial voltage v0.
class LeakConfig {
 public:
  explicit LeakConfig(double tau1, double v0 = 0.0);

  double tau1() const { return tau1_; }
  double v0() const { return v0_; }

 private:
  double tau1_;
  double v0_;
};

/// |tau1 - tau2| below this fraction of tau1 is treated as tau1 == tau2.
inline constexpr double kDegeneracyBand = 1e-9;

/// 10 max(tau1, tau2) + q t_w.
double default_t_end(const TdacConfig& config, const LeakConfig& leak);

/// Exact solution of
///   dV/dt = -V / tau1 + gain * V_set exp(-t / tau2) * D(t)
/// where D is the drive indicator of the code's pulse schedule. The solution
/// is tabulated at slot boundaries and evaluated analytically in between.
class LeakyResponse {
 public:
  /// Identity drive characteristic only (UnsupportedConfig otherwise).
  LeakyResponse(const TdacConfig& config, const LeakConfig& leak, const DigitalCode& code,
                double gain = 1.0);

  /// V(t) for t >= 0.
  double operator()(double t) const;

  /// Slot boundaries 0, t_w, ..., q t_w.
  const std::vector<double>& boundaries() const { return boundaries_; }

 private:
  // Advances v from t0 to t0 + h with constant drive indicator `on`.
  double propagate(double v, double t0, double h, bool on) const;

  double tau1_;
  double tau2_;
  double amplitude_;  // gain * V_set
  double rate_diff_;  // 1/tau1 - 1/tau2, zero inside the degeneracy band
  std::vector<double> boundaries_;
  std::vector<double> boundary_values_;
  std::vector<bool> gate_;  // per slot
};

/// Output sample grid: multiples of dt_out up to t_end, every slot boundary
/// q t_w or earlier, and t_end itself; merged and deduplicated.
std::vector<double> sample_times(const TdacConfig& config, double t_end, double dt_out);

/// Leaky-output simulation by the piecewise-analytic propagator.
/// `t_end` defaults to default_t_end().
Waveform simulate_leaky(const TdacConfig& config, const LeakConfig& leak,
                        const DigitalCode& code, std::optional<double> t_end, double dt_out);

/// Same ODE by fixed-step classical RK4, steps split at slot boundaries.
/// Accepts any drive characteristic. Requires dt <= t_w / 16. Samples are
/// emitted on sample_times(config, t_end, dt).
Waveform simulate_leaky_numeric(const TdacConfig& config, const LeakConfig& leak,
                                const DigitalCode& code, std::optional<double> t_end,
                                double dt, double gain = 1.0);

/// t V_set exp(-t / tau1).
double alpha_waveform(double v_set, double tau1, double t);

/// tau1 tau2 / (tau1 - tau2) V_set (exp(-t/tau1) - exp(-t/tau2)); the alpha
/// limit inside the degeneracy band.
double dual_exp_waveform(double v_set, double tau1, double tau2, double t);

}  // namespace tdac
