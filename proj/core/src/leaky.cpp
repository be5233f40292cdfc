#include "tdac/leaky.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tdac/convert.hpp"
#include "tdac/error.hpp"

namespace tdac {
namespace {

constexpr std::size_t kMaxSamples = 50'000'000;

bool degenerate(double tau1, double tau2) { return std::abs(tau1 - tau2) < kDegeneracyBand * tau1; }

void require_width(const TdacConfig& config, const DigitalCode& code) {
  if (code.width() != config.bits()) {
    throw InputError("code has " + std::to_string(code.width()) + " bits, converter expects " +
                     std::to_string(config.bits()));
  }
}

}  // namespace

LeakConfig::LeakConfig(double tau1, double v0) : tau1_(tau1), v0_(v0) {
  if (!std::isfinite(tau1) || tau1 <= 0.0) throw InputError("leak time constant tau1 must be positive");
  if (!std::isfinite(v0)) throw InputError("initial voltage v0 must be finite");
}

double default_t_end(const TdacConfig& config, const LeakConfig& leak) {
  return 10.0 * std::max(leak.tau1(), config.tau2()) + config.conversion_time();
}

LeakyResponse::LeakyResponse(const TdacConfig& config, const LeakConfig& leak,
                             const DigitalCode& code, double gain)
    : tau1_(leak.tau1()),
      tau2_(config.tau2()),
      amplitude_(gain * config.v_set()),
      rate_diff_(degenerate(leak.tau1(), config.tau2()) ? 0.0
                                                         : 1.0 / leak.tau1() - 1.0 / config.tau2()) {
  if (!config.scc().is_identity()) {
    throw UnsupportedConfig(
        "analytic propagator requires the identity drive characteristic; use "
        "simulate_leaky_numeric");
  }
  require_width(config, code);
  const auto schedule = make_schedule(config);
  boundaries_.reserve(schedule.size() + 1);
  gate_.reserve(schedule.size());
  for (const auto& slot : schedule.slots()) {
    boundaries_.push_back(slot.t_start);
    gate_.push_back(code.bit(slot.bit_index));
  }
  boundaries_.push_back(schedule.end_time());

  boundary_values_.reserve(boundaries_.size());
  boundary_values_.push_back(leak.v0());
  for (std::size_t k = 0; k < gate_.size(); ++k) {
    boundary_values_.push_back(propagate(boundary_values_[k], boundaries_[k],
                                         boundaries_[k + 1] - boundaries_[k], gate_[k]));
  }
}

double LeakyResponse::propagate(double v, double t0, double h, bool on) const {
  const double decay = std::exp(-h / tau1_);
  if (!on || h <= 0.0) return v * decay;
  // Variation of constants over [t0, t0 + h]:
  //   A exp(-t0/tau2) * integral_0^h exp(-(h - s)/tau1) exp(-s/tau2) ds
  // = A exp(-t0/tau2) * exp(-h/tau1) (exp(lambda h) - 1) / lambda.
  double kernel;
  const double lh = rate_diff_ * h;
  if (rate_diff_ == 0.0) {
    kernel = decay * h;
  } else if (std::abs(lh) <= 1.0) {
    kernel = decay * std::expm1(lh) / rate_diff_;
  } else {
    kernel = (std::exp(-h / tau2_) - decay) / rate_diff_;
  }
  return v * decay + amplitude_ * std::exp(-t0 / tau2_) * kernel;
}

double LeakyResponse::operator()(double t) const {
  if (!(t >= 0.0)) throw InputError("response requested at negative time");
  const double t_conv = boundaries_.back();
  if (t >= t_conv) return boundary_values_.back() * std::exp(-(t - t_conv) / tau1_);
  auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), t);
  const auto k = static_cast<std::size_t>(std::distance(boundaries_.begin(), it)) - 1;
  return propagate(boundary_values_[k], boundaries_[k], t - boundaries_[k], gate_[k]);
}

std::vector<double> sample_times(const TdacConfig& config, double t_end, double dt_out) {
  if (!std::isfinite(t_end) || t_end <= 0.0) throw InputError("t_end must be positive");
  if (!std::isfinite(dt_out) || dt_out <= 0.0) throw InputError("output step must be positive");
  const double n_grid = std::floor(t_end / dt_out);
  if (n_grid + config.bits() + 2 > static_cast<double>(kMaxSamples)) {
    throw ResourceLimit("waveform would exceed " + std::to_string(kMaxSamples) + " samples");
  }

  struct Point {
    double t;
    bool boundary;
  };
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n_grid) + config.bits() + 3);
  for (std::size_t i = 0; i <= static_cast<std::size_t>(n_grid); ++i) {
    const double t = static_cast<double>(i) * dt_out;
    if (t <= t_end) pts.push_back({t, false});
  }
  const auto schedule = make_schedule(config);
  for (const auto& slot : schedule.slots()) {
    if (slot.t_start <= t_end) pts.push_back({slot.t_start, true});
  }
  if (schedule.end_time() <= t_end) pts.push_back({schedule.end_time(), true});
  pts.push_back({t_end, false});

  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.t < b.t; });

  // Points closer than eps collapse to one; slot boundaries win.
  const double eps = 1e-12 * std::max(1.0, t_end);
  std::vector<double> out;
  out.reserve(pts.size());
  bool last_is_boundary = false;
  for (const auto& p : pts) {
    if (!out.empty() && p.t - out.back() <= eps) {
      if (p.boundary && !last_is_boundary) {
        out.back() = p.t;
        last_is_boundary = true;
      }
      continue;
    }
    out.push_back(p.t);
    last_is_boundary = p.boundary;
  }
  return out;
}

Waveform simulate_leaky(const TdacConfig& config, const LeakConfig& leak,
                        const DigitalCode& code, std::optional<double> t_end, double dt_out) {
  const LeakyResponse response(config, leak, code);
  const auto times = sample_times(config, t_end.value_or(default_t_end(config, leak)), dt_out);
  std::vector<Sample> samples;
  samples.reserve(times.size());
  for (double t : times) samples.push_back({t, response(t)});
  return Waveform(std::move(samples));
}

Waveform simulate_leaky_numeric(const TdacConfig& config, const LeakConfig& leak,
                                const DigitalCode& code, std::optional<double> t_end, double dt,
                                double gain) {
  require_width(config, code);
  if (!(dt > 0.0) || dt > config.pulse_width() / 16.0 * (1.0 + 1e-12)) {
    throw InputError("integration step must satisfy 0 < dt <= t_w / 16");
  }
  const auto times = sample_times(config, t_end.value_or(default_t_end(config, leak)), dt);
  const auto schedule = make_schedule(config);
  const double tau1 = leak.tau1();
  const double amplitude = gain;
  const auto& scc = config.scc();

  std::vector<Sample> samples;
  samples.reserve(times.size());
  double v = leak.v0();
  samples.push_back({times.front(), v});
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double a = times[i - 1];
    const double b = times[i];
    const bool on = schedule.drive_indicator(code, 0.5 * (a + b)) != 0;
    auto rhs = [&](double t, double y) {
      const double forcing = on ? amplitude * scc(drive_voltage(config, t)) : 0.0;
      return -y / tau1 + forcing;
    };
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / dt - 1e-9)));
    const double h = (b - a) / n;
    for (int s = 0; s < n; ++s) {
      const double t = a + s * h;
      const double k1 = rhs(t, v);
      const double k2 = rhs(t + 0.5 * h, v + 0.5 * h * k1);
      const double k3 = rhs(t + 0.5 * h, v + 0.5 * h * k2);
      const double k4 = rhs(t + h, v + h * k3);
      v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    samples.push_back({b, v});
  }
  return Waveform(std::move(samples));
}

double alpha_waveform(double v_set, double tau1, double t) {
  if (!(t >= 0.0)) throw InputError("alpha waveform requested at negative time");
  if (!(tau1 > 0.0)) throw InputError("tau1 must be positive");
  return t * v_set * std::exp(-t / tau1);
}

double dual_exp_waveform(double v_set, double tau1, double tau2, double t) {
  if (!(t >= 0.0)) throw InputError("dual exponential requested at negative time");
  if (!(tau1 > 0.0) || !(tau2 > 0.0)) throw InputError("time constants must be positive");
  if (degenerate(tau1, tau2)) return alpha_waveform(v_set, tau1, t);
  // Symmetric in (tau1, tau2); order so that mu > 0 and nothing overflows.
  const double slow = std::max(tau1, tau2);
  const double fast = std::min(tau1, tau2);
  const double mu = 1.0 / fast - 1.0 / slow;
  return v_set * std::exp(-t / slow) * -std::expm1(-mu * t) / mu;
}

}  // namespace tdac
