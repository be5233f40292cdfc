#pragma once

#include <span>
#include <vector>

namespace tdac {

struct Sample {
  double t;
  double v;
};

struct Peak {
  double time;
  double value;
};

/// Sampled output voltage trajectory. Sample times are strictly increasing.
class Waveform {
 public:
  /// Throws InputError if `samples` is empty or times are not strictly
  /// increasing.
  explicit Waveform(std::vector<Sample> samples);

  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }

  /// Sample-level maximum; ties resolve to the earliest sample.
  double peak_value() const { return samples_[peak_index_].v; }
  double peak_time() const { return samples_[peak_index_].t; }
  std::size_t peak_index() const { return peak_index_; }

 private:
  std::vector<Sample> samples_;
  std::size_t peak_index_ = 0;
};

/// Sample maximum refined by a quadratic through the three samples around it.
/// Falls back to the raw sample at the edges or where the local parabola is
/// not concave.
Peak peak_of(const Waveform& waveform);

/// Same, on raw samples. Throws InputError when empty.
Peak peak_of(std::span<const Sample> samples);

}  // namespace tdac
