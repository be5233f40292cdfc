#pragma once

#include <optional>
#include <vector>

#include "tdac/code.hpp"
#include "tdac/config.hpp"

namespace tdac {

struct Slot {
  int bit_index;  // k of B_k sampled in this window
  double t_start;
  double t_end;
};

/// Non-overlapping sampling windows S_{B,k}. Slot k covers [k t_w, (k+1) t_w]
/// and samples bit q-k, so the MSB is converted first. t = 0 is the trailing
/// edge of the trigger.
class PulseSchedule {
 public:
  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t size() const { return slots_.size(); }
  double end_time() const { return slots_.back().t_end; }

  /// Slot position (0-based) containing t, with half-open windows [start, end).
  std::optional<std::size_t> slot_at(double t) const;

  /// D(t) = sum_k S_{B,q-k}(t) B_{q-k}; always 0 or 1.
  int drive_indicator(const DigitalCode& code, double t) const;

 private:
  friend PulseSchedule make_schedule(const TdacConfig&);
  double pulse_width_ = 0.0;
  std::vector<Slot> slots_;
};

PulseSchedule make_schedule(const TdacConfig& config);

}  // namespace tdac
