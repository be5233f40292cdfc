#include "tdac/calibrate.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "tdac/analysis.hpp"
#include "tdac/error.hpp"

namespace tdac {
namespace {

constexpr int kScanPoints = 64;
constexpr double kRelTol = 1e-12;

double max_abs_inl(double tau2, int bits, double pulse_width) {
  const TdacConfig config(bits, pulse_width, 1.0, tau2, 1.0);
  return linearity_report(transfer_curve(config)).max_abs_inl;
}

}  // namespace

Calibration calibrate(double tau2, int bits, std::pair<double, double> bounds) {
  auto [lo, hi] = bounds;
  if (!(tau2 > 0.0) || !std::isfinite(tau2)) throw InputError("tau2 must be positive");
  if (bits < 1 || bits > kMaxTransferBits) throw InputError("bit count out of range");
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw InputError("calibration bounds must satisfy 0 < lo < hi");
  }
  auto f = [&](double tw) { return max_abs_inl(tau2, bits, tw); };

  // Coarse scan to locate the basin, then golden section inside it.
  std::array<double, kScanPoints> fx{};
  int best = 0;
  for (int i = 0; i < kScanPoints; ++i) {
    fx[i] = f(lo + (hi - lo) * i / (kScanPoints - 1));
    if (fx[i] < fx[best]) best = i;
  }
  if (best == 0 || best == kScanPoints - 1) {
    throw SearchError("linearity optimum is not bracketed by [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }

  constexpr double inv_phi = std::numbers::phi - 1.0;
  double a = lo + (hi - lo) * (best - 1) / (kScanPoints - 1);
  double b = lo + (hi - lo) * (best + 1) / (kScanPoints - 1);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 300 && (b - a) > kRelTol * (a + b); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double tw = 0.5 * (a + b);
  return {tw, f(tw)};
}

}  // namespace tdac
