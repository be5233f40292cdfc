#pragma once

#include <utility>

namespace tdac {

struct Calibration {
  double pulse_width;
  double max_abs_inl;
};

/// Finds the pulse width in `bounds` that minimises the max |INL| of the
/// q-bit transfer curve for drive time constant tau2. Coarse scan followed by
/// golden-section refinement. Throws SearchError if the minimum sits on a
/// bound, InputError for invalid bounds.
Calibration calibrate(double tau2, int bits, std::pair<double, double> bounds);

inline double calibrate_pulse_width(double tau2, int bits, std::pair<double, double> bounds) {
  return calibrate(tau2, bits, bounds).pulse_width;
}

}  // namespace tdac
