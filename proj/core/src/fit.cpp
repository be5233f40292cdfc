#include "tdac/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tdac/error.hpp"
#include "tdac/leaky.hpp"

namespace tdac {
namespace {

// Parameters live in log space for the time constants:
//   alpha: {A, log tau}
//   dual:  {A, log a, log b} with rates a = 1/tau1, b = 1/tau2
class Model {
 public:
  explicit Model(FitModel kind) : kind_(kind) {}

  int size() const { return kind_ == FitModel::Alpha ? 2 : 3; }

  // Shape with unit amplitude.
  double shape(const Eigen::VectorXd& p, double t) const {
    if (kind_ == FitModel::Alpha) return t * std::exp(-t * std::exp(-p[1]));
    const auto [a, b] = rates(p);
    return dual_shape(a, b, t);
  }

  double value(const Eigen::VectorXd& p, double t) const { return p[0] * shape(p, t); }

  template <typename Row>
  void gradient(const Eigen::VectorXd& p, double t, Row&& row) const {
    if (kind_ == FitModel::Alpha) {
      const double tau = std::exp(p[1]);
      const double e = t * std::exp(-t / tau);
      row[0] = e;
      row[1] = p[0] * e * t / tau;  // tau * d/dtau
      return;
    }
    const auto [a, b] = rates(p);
    const double g = dual_shape(a, b, t);
    const double d = b - a;
    row[0] = g;
    row[1] = a * p[0] * (g - t * std::exp(-a * t)) / d;
    row[2] = b * p[0] * (t * std::exp(-b * t) - g) / d;
  }

  std::pair<double, double> rates(const Eigen::VectorXd& p) const {
    double a = std::exp(p[1]);
    double b = std::exp(p[2]);
    // The rate-difference quotients lose all precision at a == b.
    if (std::abs(b - a) < 1e-6 * std::max(a, b)) b = a * (1.0 + 1e-6);
    return {a, b};
  }

  static double dual_shape(double a, double b, double t) {
    // (exp(-a t) - exp(-b t)) / (b - a), evaluated from the slower rate.
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    return std::exp(-lo * t) * -std::expm1(-(hi - lo) * t) / (hi - lo);
  }

 private:
  FitModel kind_;
};

struct Problem {
  std::vector<double> t;
  std::vector<double> v;
  double peak = 0.0;
};

double sse_of(const Model& m, const Problem& pr, const Eigen::VectorXd& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < pr.t.size(); ++i) {
    const double r = m.value(p, pr.t[i]) - pr.v[i];
    s += r * r;
  }
  return s;
}

// Amplitude minimising SSE for fixed time constants.
void solve_amplitude(const Model& m, const Problem& pr, Eigen::VectorXd& p) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < pr.t.size(); ++i) {
    const double s = m.shape(p, pr.t[i]);
    num += s * pr.v[i];
    den += s * s;
  }
  p[0] = den > 0.0 ? num / den : 0.0;
}

// Shrinking grid over the log time constants around `p`, amplitude solved
// linearly at each node.
Eigen::VectorXd grid_search(const Model& m, const Problem& pr, Eigen::VectorXd p) {
  constexpr int kNodes = 21;
  const int dims = m.size() - 1;
  double half_width = std::log(10.0);
  Eigen::VectorXd best = p;
  solve_amplitude(m, pr, best);
  double best_sse = sse_of(m, pr, best);
  for (int round = 0; round < 30; ++round) {
    const Eigen::VectorXd center = best;
    const int total = dims == 1 ? kNodes : kNodes * kNodes;
    for (int n = 0; n < total; ++n) {
      Eigen::VectorXd trial = center;
      trial[1] = center[1] + half_width * (2.0 * (n % kNodes) / (kNodes - 1) - 1.0);
      if (dims == 2) trial[2] = center[2] + half_width * (2.0 * (n / kNodes) / (kNodes - 1) - 1.0);
      solve_amplitude(m, pr, trial);
      const double s = sse_of(m, pr, trial);
      if (s < best_sse) {
        best_sse = s;
        best = trial;
      }
    }
    half_width *= 0.5;
  }
  return best;
}

Eigen::VectorXd initial_guess(FitModel kind, const Problem& pr, const Waveform& w) {
  const Model m(kind);
  const Peak peak = peak_of(w);
  const double t_span = pr.t.back() - pr.t.front();
  const double t_peak = peak.time > 0.0 ? peak.time : 0.1 * t_span;
  Eigen::VectorXd p(m.size());
  if (kind == FitModel::Alpha) {
    p << 1.0, std::log(t_peak);
    solve_amplitude(m, pr, p);
    return p;
  }

  // Slow constant from the late-time log slope.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < pr.t.size(); ++i) {
    if (pr.t[i] <= t_peak || pr.v[i] > 0.5 * peak.value || pr.v[i] < 1e-6 * peak.value) continue;
    const double y = std::log(pr.v[i]);
    sx += pr.t[i];
    sy += y;
    sxx += pr.t[i] * pr.t[i];
    sxy += pr.t[i] * y;
    ++n;
  }
  double tau_slow = 2.0 * t_peak;
  if (n >= 3) {
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (slope < 0.0 && std::isfinite(slope)) tau_slow = -1.0 / slope;
  }

  // Fast constant from the peak time:
  //   t* = ln(ts/tf) ts tf / (ts - tf), increasing in tf on (0, ts).
  double tau_fast = 0.9 * tau_slow;
  if (t_peak < tau_slow * (1.0 - 1e-3)) {
    auto t_star = [&](double tf) { return std::log(tau_slow / tf) * tau_slow * tf / (tau_slow - tf); };
    double lo = 1e-9 * tau_slow;
    double hi = tau_slow * (1.0 - 1e-9);
    for (int it = 0; it < 200; ++it) {
      const double mid = std::sqrt(lo * hi);
      (t_star(mid) < t_peak ? lo : hi) = mid;
    }
    tau_fast = std::sqrt(lo * hi);
  }
  p << 1.0, -std::log(tau_slow), -std::log(tau_fast);
  solve_amplitude(m, pr, p);
  return p;
}

}  // namespace

const char* to_string(FitModel m) {
  return m == FitModel::Alpha ? "alpha" : "dual-exponential";
}

FitResult fit_waveform(const Waveform& waveform, FitModel model, const FitOptions& options) {
  if (waveform.size() < 8) throw InputError("fit needs at least 8 samples");
  Problem pr;
  pr.t.reserve(waveform.size());
  pr.v.reserve(waveform.size());
  double vmin = std::numeric_limits<double>::infinity();
  for (const auto& s : waveform.samples()) {
    pr.t.push_back(s.t);
    pr.v.push_back(s.v);
    vmin = std::min(vmin, s.v);
  }
  pr.peak = waveform.peak_value();
  if (!(pr.peak > vmin) || !(pr.peak > 0.0)) {
    throw InputError("degenerate waveform: no positive peak to fit");
  }

  const Model m(model);
  const int np = m.size();
  const std::size_t ns = pr.t.size();
  Eigen::VectorXd p = initial_guess(model, pr, waveform);
  double sse = sse_of(m, pr, p);
  const double sse_tol = options.sse_tol * pr.peak * pr.peak;

  Eigen::MatrixXd jac(ns, np);
  Eigen::VectorXd res(ns);
  double lambda = 1e-3;
  int rejected = 0;
  bool reseeded = false;
  bool converged = false;
  int it = 0;
  for (; it < options.max_iterations && !converged; ++it) {
    for (std::size_t i = 0; i < ns; ++i) {
      res[i] = m.value(p, pr.t[i]) - pr.v[i];
      m.gradient(p, pr.t[i], jac.row(i));
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * res;

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd damped = jtj;
      for (int j = 0; j < np; ++j) damped(j, j) += lambda * std::max(jtj(j, j), 1e-300);
      const Eigen::VectorXd step = damped.ldlt().solve(-grad);
      const Eigen::VectorXd trial = p + step;
      const double trial_sse = sse_of(m, pr, trial);
      if (step.allFinite() && std::isfinite(trial_sse) && trial_sse < sse) {
        // Relative change: log-parameters already measure it directly.
        double change = std::abs(step[0]) / std::max(std::abs(p[0]), 1e-300);
        for (int j = 1; j < np; ++j) change = std::max(change, std::abs(step[j]));
        const double drop = sse - trial_sse;
        p = trial;
        sse = trial_sse;
        if (change < options.param_tol || (lambda <= 1.0 && drop < sse_tol)) converged = true;
        lambda = std::max(lambda / 3.0, 1e-12);
        rejected = 0;
        accepted = true;
        break;
      }
      lambda *= 4.0;
      if (++rejected >= 3 && !reseeded) {
        reseeded = true;
        const Eigen::VectorXd seeded = grid_search(m, pr, p);
        const double seeded_sse = sse_of(m, pr, seeded);
        if (seeded_sse < sse) {
          p = seeded;
          sse = seeded_sse;
          lambda = 1e-3;
          rejected = 0;
          break;
        }
      }
      if (lambda > 1e16) break;
    }
    if (!accepted && lambda > 1e16) break;
  }

  FitResult r{model, p[0], 0.0, 0.0, sse, converged, it};
  if (model == FitModel::Alpha) {
    r.tau1_fit = r.tau2_fit = std::exp(p[1]);
  } else {
    const double tau_a = std::exp(-p[1]);
    const double tau_b = std::exp(-p[2]);
    r.tau1_fit = std::max(tau_a, tau_b);
    r.tau2_fit = std::min(tau_a, tau_b);
  }
  return r;
}

double evaluate(const FitResult& fit, double t) {
  if (fit.model == FitModel::Alpha) return alpha_waveform(fit.v_set_fit, fit.tau1_fit, t);
  return dual_exp_waveform(fit.v_set_fit, fit.tau1_fit, fit.tau2_fit, t);
}

}  // namespace tdac
