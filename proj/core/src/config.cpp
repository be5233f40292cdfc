#include "tdac/config.hpp"

#include <cmath>
#include <string>

#include "tdac/error.hpp"

namespace tdac {
namespace {

void require_positive(double x, const char* name) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw InputError(std::string(name) + " must be finite and positive, got " + std::to_string(x));
  }
}

}  // namespace

DriveCharacteristic DriveCharacteristic::custom(std::function<double(double)> fn) {
  if (!fn) throw InputError("drive characteristic must be callable");
  DriveCharacteristic c;
  c.fn_ = std::move(fn);
  return c;
}

TdacConfig::TdacConfig(int bits, double pulse_width, double v_set, double tau2, double c_out,
                       DriveCharacteristic scc)
    : bits_(bits),
      pulse_width_(pulse_width),
      v_set_(v_set),
      tau2_(tau2),
      c_out_(c_out),
      scc_(std::move(scc)) {
  if (bits < 1) throw InputError("bit count q must be >= 1, got " + std::to_string(bits));
  require_positive(pulse_width, "pulse width t_w");
  require_positive(v_set, "drive amplitude v_set");
  require_positive(tau2, "drive time constant tau2");
  require_positive(c_out, "output capacitance c_out");
  if (!std::isfinite(ratio()) || ratio() <= 0.0) throw InputError("t_w / tau2 is not finite");
}

TdacConfig TdacConfig::from_ratio(int bits, double ratio, double tau2, double v_set,
                                  double c_out) {
  require_positive(ratio, "ratio t_w/tau2");
  return TdacConfig(bits, ratio * tau2, v_set, tau2, c_out);
}

TdacConfig TdacConfig::with_bits(int bits) const {
  return TdacConfig(bits, pulse_width_, v_set_, tau2_, c_out_, scc_);
}

TdacConfig TdacConfig::with_pulse_width(double pulse_width) const {
  return TdacConfig(bits_, pulse_width, v_set_, tau2_, c_out_, scc_);
}

}  // namespace tdac
