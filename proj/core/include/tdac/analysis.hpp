#pragma once

#include <cstdint>
#include <vector>

#include "tdac/config.hpp"

namespace tdac {

struct CurveEntry {
  std::uint64_t code;
  double v_out;
};

/// Output value for every code 0 .. 2^q - 1, in code order.
struct TransferCurve {
  std::vector<CurveEntry> entries;
  TdacConfig config;
};

inline constexpr int kMaxTransferBits = 16;

/// Enumerates convert_closed_form over all codes. Throws ResourceLimit for
/// q > kMaxTransferBits.
TransferCurve transfer_curve(const TdacConfig& config);

/// Endpoint-fit linearity metrics, in LSB units.
struct LinearityReport {
  double lsb_step = 0.0;
  std::vector<double> dnl;  // size n - 1
  std::vector<double> inl;  // size n
  bool monotone = true;
  double max_abs_inl = 0.0;
  double max_abs_dnl = 0.0;
};

/// Throws InputError with fewer than two entries and DegenerateCurve when
/// the endpoints coincide.
LinearityReport linearity_report(const TransferCurve& curve);

/// Same metrics over a contiguous subrange of entries [first, first + count).
LinearityReport linearity_report(const TransferCurve& curve, std::size_t first,
                                 std::size_t count);

}  // namespace tdac
