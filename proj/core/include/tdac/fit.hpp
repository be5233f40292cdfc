#pragma once

#include "tdac/waveform.hpp"

namespace tdac {

enum class FitModel { Alpha, DualExponential };

const char* to_string(FitModel m);

struct FitResult {
  FitModel model;
  double v_set_fit;
  double tau1_fit;
  double tau2_fit;  // equals tau1_fit for the alpha model
  double sse;
  bool converged;
  int iterations;
};

struct FitOptions {
  int max_iterations = 500;
  double param_tol = 1e-9;  // relative parameter change
  double sse_tol = 1e-12;   // SSE change, relative to peak^2
};

/// Least-squares fit of an alpha (t A exp(-t/tau1)) or dual-exponential
/// (A tau1 tau2/(tau1-tau2) (exp(-t/tau1) - exp(-t/tau2))) model.
///
/// Levenberg-Marquardt on log-parameters with analytic Jacobians. After three
/// consecutive rejected steps the time constants are re-seeded by a shrinking
/// grid search (amplitude solved linearly) and the iteration resumes.
///
/// Requires at least 8 samples and a non-flat waveform (InputError
/// otherwise). Non-convergence is reported through `converged`, not thrown.
/// For the dual model tau1_fit >= tau2_fit.
FitResult fit_waveform(const Waveform& waveform, FitModel model, const FitOptions& options = {});

/// Model value at t for a fit result.
double evaluate(const FitResult& fit, double t);

}  // namespace tdac
