#include "tdac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tdac/convert.hpp"
#include "tdac/error.hpp"

namespace tdac {

TransferCurve transfer_curve(const TdacConfig& config) {
  if (config.bits() > kMaxTransferBits) {
    throw ResourceLimit("transfer curve enumeration limited to q <= " +
                        std::to_string(kMaxTransferBits));
  }
  const std::uint64_t n = std::uint64_t{1} << config.bits();
  TransferCurve curve{{}, config};
  curve.entries.reserve(n);
  for (std::uint64_t c = 0; c < n; ++c) {
    curve.entries.push_back({c, convert_closed_form(config, DigitalCode::from_value(config.bits(), c))});
  }
  return curve;
}

LinearityReport linearity_report(const TransferCurve& curve) {
  return linearity_report(curve, 0, curve.entries.size());
}

LinearityReport linearity_report(const TransferCurve& curve, std::size_t first,
                                 std::size_t count) {
  if (count < 2) throw InputError("linearity metrics need at least two curve entries");
  if (first + count > curve.entries.size()) throw InputError("curve range out of bounds");
  const auto* v = curve.entries.data() + first;
  const double v_first = v[0].v_out;
  const double v_last = v[count - 1].v_out;
  const double step = (v_last - v_first) / static_cast<double>(count - 1);
  if (step == 0.0 || !std::isfinite(step)) {
    throw DegenerateCurve("transfer curve endpoints coincide; LSB step is zero");
  }

  LinearityReport r;
  r.lsb_step = step;
  r.inl.resize(count);
  r.dnl.resize(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    r.inl[i] = (v[i].v_out - (v_first + static_cast<double>(i) * step)) / step;
    r.max_abs_inl = std::max(r.max_abs_inl, std::abs(r.inl[i]));
  }
  for (std::size_t i = 0; i + 1 < count; ++i) {
    r.dnl[i] = (v[i + 1].v_out - v[i].v_out) / step - 1.0;
    r.max_abs_dnl = std::max(r.max_abs_dnl, std::abs(r.dnl[i]));
    if (v[i + 1].v_out < v[i].v_out) r.monotone = false;
  }
  return r;
}

}  // namespace tdac
