#include "tdac/code.hpp"

#include <algorithm>
#include <string>

#include "tdac/error.hpp"

namespace tdac {

DigitalCode DigitalCode::from_value(int width, std::uint64_t value) {
  if (width < 1 || width > 64) {
    throw InputError("code width must be in [1, 64] for integer construction, got " +
                     std::to_string(width));
  }
  if (width < 64 && (value >> width) != 0) {
    throw InputError("value " + std::to_string(value) + " does not fit in " +
                     std::to_string(width) + " bits");
  }
  std::vector<bool> bits(static_cast<std::size_t>(width));
  for (int k = 0; k < width; ++k) bits[k] = ((value >> k) & 1U) != 0;
  return DigitalCode(std::move(bits));
}

DigitalCode DigitalCode::from_string(std::string_view msb_first) {
  if (msb_first.empty()) throw InputError("empty code string");
  std::vector<bool> bits(msb_first.size());
  for (std::size_t i = 0; i < msb_first.size(); ++i) {
    const char c = msb_first[msb_first.size() - 1 - i];
    if (c != '0' && c != '1') {
      throw InputError("code string may only contain '0' and '1': \"" + std::string(msb_first) +
                       "\"");
    }
    bits[i] = c == '1';
  }
  return DigitalCode(std::move(bits));
}

DigitalCode DigitalCode::all_ones(int width) {
  if (width < 1) throw InputError("code width must be >= 1");
  return DigitalCode(std::vector<bool>(static_cast<std::size_t>(width), true));
}

DigitalCode DigitalCode::all_zeros(int width) {
  if (width < 1) throw InputError("code width must be >= 1");
  return DigitalCode(std::vector<bool>(static_cast<std::size_t>(width), false));
}

bool DigitalCode::bit(int k) const {
  if (k < 1 || k > width()) {
    throw InputError("bit index " + std::to_string(k) + " outside [1, " +
                     std::to_string(width()) + "]");
  }
  return bits_[static_cast<std::size_t>(k - 1)];
}

std::uint64_t DigitalCode::value() const {
  if (width() > 64) throw InputError("code wider than 64 bits has no integer value");
  std::uint64_t v = 0;
  for (int k = width() - 1; k >= 0; --k) v = (v << 1) | (bits_[k] ? 1U : 0U);
  return v;
}

bool DigitalCode::any() const { return std::find(bits_.begin(), bits_.end(), true) != bits_.end(); }

std::string DigitalCode::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[bits_.size() - 1 - i] = '1';
  }
  return s;
}

}  // namespace tdac
