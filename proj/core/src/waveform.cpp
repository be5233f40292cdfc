#include "tdac/waveform.hpp"

#include <algorithm>
#include <string>

#include "tdac/error.hpp"

namespace tdac {
namespace {

std::size_t argmax_earliest(std::span<const Sample> s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].v > s[best].v) best = i;
  }
  return best;
}

}  // namespace

Waveform::Waveform(std::vector<Sample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw InputError("waveform must contain at least one sample");
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].t > samples_[i - 1].t)) {
      throw InputError("waveform times must be strictly increasing (sample " + std::to_string(i) +
                       ")");
    }
  }
  peak_index_ = argmax_earliest(samples_);
}

Peak peak_of(const Waveform& waveform) { return peak_of(std::span(waveform.samples())); }

Peak peak_of(std::span<const Sample> s) {
  if (s.empty()) throw InputError("peak of an empty waveform");
  const std::size_t i = argmax_earliest(s);
  const Peak raw{s[i].t, s[i].v};
  if (i == 0 || i + 1 >= s.size()) return raw;

  // Newton form through (t0,v0), (t1,v1), (t2,v2):
  //   p(t) = v0 + d01 (t - t0) + c (t - t0)(t - t1)
  const auto [t0, v0] = s[i - 1];
  const auto [t1, v1] = s[i];
  const auto [t2, v2] = s[i + 1];
  const double d01 = (v1 - v0) / (t1 - t0);
  const double d12 = (v2 - v1) / (t2 - t1);
  const double c = (d12 - d01) / (t2 - t0);
  if (!(c < 0.0)) return raw;

  const double t = std::clamp(0.5 * (t0 + t1) - d01 / (2.0 * c), t0, t2);
  const double v = v0 + d01 * (t - t0) + c * (t - t0) * (t - t1);
  if (v < raw.value) return raw;
  return {t, v};
}

}  // namespace tdac
