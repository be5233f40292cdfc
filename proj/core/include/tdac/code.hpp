#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tdac {

/// Digital input code B_q..B_1. Bits are stored LSB first: bit(1) is the LSB
/// and bit(width()) the MSB.
class DigitalCode {
 public:
  /// Builds a code of `width` bits from an unsigned integer. Requires
  /// 1 <= width <= 64 and value < 2^width.
  static DigitalCode from_value(int width, std::uint64_t value);

  /// Parses an MSB-first binary string such as "11101000".
  static DigitalCode from_string(std::string_view msb_first);

  static DigitalCode all_ones(int width);
  static DigitalCode all_zeros(int width);

  int width() const { return static_cast<int>(bits_.size()); }

  /// B_k for k in [1, width()].
  bool bit(int k) const;

  /// Integer value sum_k B_k 2^(k-1). Throws InputError when width() > 64.
  std::uint64_t value() const;

  bool any() const;

  /// MSB-first binary string, the inverse of from_string.
  std::string to_string() const;

  friend bool operator==(const DigitalCode&, const DigitalCode&) = default;

 private:
  explicit DigitalCode(std::vector<bool> lsb_first) : bits_(std::move(lsb_first)) {}

  std::vector<bool> bits_;
};

}  // namespace tdac
