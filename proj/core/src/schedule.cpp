#include "tdac/schedule.hpp"

#include <cmath>

#include "tdac/error.hpp"

namespace tdac {

PulseSchedule make_schedule(const TdacConfig& config) {
  PulseSchedule s;
  s.pulse_width_ = config.pulse_width();
  const int q = config.bits();
  s.slots_.reserve(static_cast<std::size_t>(q));
  for (int k = 0; k < q; ++k) {
    // Slot k samples bit q - k; boundaries computed from k, not accumulated.
    s.slots_.push_back({q - k, k * config.pulse_width(), (k + 1) * config.pulse_width()});
  }
  return s;
}

std::optional<std::size_t> PulseSchedule::slot_at(double t) const {
  if (t < 0.0 || t >= end_time()) return std::nullopt;
  auto k = static_cast<std::size_t>(std::floor(t / pulse_width_));
  if (k >= slots_.size()) k = slots_.size() - 1;
  // floor() can land one slot off right at a boundary.
  if (t < slots_[k].t_start && k > 0) --k;
  if (t >= slots_[k].t_end && k + 1 < slots_.size()) ++k;
  return k;
}

int PulseSchedule::drive_indicator(const DigitalCode& code, double t) const {
  if (code.width() != static_cast<int>(slots_.size())) {
    throw InputError("code width does not match schedule length");
  }
  const auto k = slot_at(t);
  if (!k) return 0;
  return code.bit(slots_[*k].bit_index) ? 1 : 0;
}

}  // namespace tdac
