#pragma once

#include <functional>

namespace tdac {

/// Maps the drive voltage to the current delivered to the output node
/// (the switched-current-source characteristic). Identity unless set.
class DriveCharacteristic {
 public:
  DriveCharacteristic() = default;

  static DriveCharacteristic identity() { return {}; }
  static DriveCharacteristic custom(std::function<double(double)> fn);

  bool is_identity() const { return !fn_; }

  double operator()(double drive) const { return fn_ ? fn_(drive) : drive; }

 private:
  std::function<double(double)> fn_;
};

/// Converter parameters. Validated on construction; immutable afterwards.
class TdacConfig {
 public:
  /// Throws InputError unless bits >= 1 and all of t_w, v_set, tau2, c_out
  /// are finite and positive.
  TdacConfig(int bits, double pulse_width, double v_set, double tau2, double c_out,
             DriveCharacteristic scc = {});

  /// Convenience: t_w = ratio * tau2.
  static TdacConfig from_ratio(int bits, double ratio, double tau2 = 1.0, double v_set = 1.0,
                               double c_out = 1.0);

  int bits() const { return bits_; }
  double pulse_width() const { return pulse_width_; }
  double v_set() const { return v_set_; }
  double tau2() const { return tau2_; }
  double c_out() const { return c_out_; }
  const DriveCharacteristic& scc() const { return scc_; }

  /// t_w / tau2.
  double ratio() const { return pulse_width_ / tau2_; }

  /// Time at which the last slot ends, q * t_w.
  double conversion_time() const { return bits_ * pulse_width_; }

  /// Copies with one field replaced.
  TdacConfig with_bits(int bits) const;
  TdacConfig with_pulse_width(double pulse_width) const;

 private:
  int bits_;
  double pulse_width_;
  double v_set_;
  double tau2_;
  double c_out_;
  DriveCharacteristic scc_;
};

}  // namespace tdac
