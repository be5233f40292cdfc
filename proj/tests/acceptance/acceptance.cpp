// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "io.hpp"
#include "tdac/tdac.hpp"

using namespace tdac;
namespace fs = std::filesystem;

namespace {

constexpr double ln2 = std::numbers::ln2;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

int all_ones_bits(double tw, double tau1, double tau2) {
  return static_cast<int>(std::ceil(10.0 * std::max(tau1, tau2) / tw - 1e-9));
}

Outcome linearity_condition() {
  Outcome o;
  const auto r = linearity_report(transfer_curve(TdacConfig::from_ratio(8, ln2)));
  o.require(r.max_abs_inl < 1e-9, "max|INL|=" + fmt(r.max_abs_inl));
  o.require(r.max_abs_dnl < 1e-9, "max|DNL|=" + fmt(r.max_abs_dnl));
  o.detail = o.pass ? "max|INL|=" + fmt(r.max_abs_inl) + " max|DNL|=" + fmt(r.max_abs_dnl) : o.detail;
  return o;
}

Outcome monotonicity_boundary() {
  Outcome o;
  for (int q : {2, 4, 8}) {
    for (double r : {0.4, 0.5, 0.6}) {
      const bool mono = linearity_report(transfer_curve(TdacConfig::from_ratio(q, r))).monotone;
      o.require(!mono, "q=" + std::to_string(q) + " ratio=" + fmt(r) + " is monotone");
    }
    for (double r : {ln2, 0.8, 1.0}) {
      const bool mono = linearity_report(transfer_curve(TdacConfig::from_ratio(q, r))).monotone;
      o.require(mono, "q=" + std::to_string(q) + " ratio=" + fmt(r) + " is not monotone");
    }
  }
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const TdacConfig cfg = TdacConfig::from_ratio(8, ln2, 1.0, 1.0, 1.0);
  const double scale = cfg.v_set() * cfg.tau2() / cfg.c_out();
  double worst = 0.0;
  for (std::uint64_t c = 0; c < 256; ++c) {
    const auto code = DigitalCode::from_value(8, c);
    worst = std::max(worst, std::abs(convert_quadrature(cfg, code, 256) - convert_closed_form(cfg, code)));
  }
  o.require(worst <= 1e-6 * scale, "max discrepancy " + fmt(worst));
  if (o.pass) o.detail = "max discrepancy " + fmt(worst);
  return o;
}

double max_error(const Waveform& w, const LeakyResponse& exact) {
  double e = 0.0;
  for (const auto& s : w.samples()) e = std::max(e, std::abs(s.v - exact(s.t)));
  return e;
}

Outcome propagator_vs_oracle() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double tau_ratios[] = {0.5, 1.0, 2.0};
  double worst_rel = 0.0;
  double min_order = 1e9, max_order = 0.0;
  for (int i = 0; i < 16; ++i) {
    const int q = 2 + static_cast<int>(rng() % 7);
    const double tau2 = 0.5 + 1.5 * u(rng);
    const double tau1 = tau_ratios[i % 3] * tau2;
    const double tw = (0.2 + u(rng)) * tau2;
    const TdacConfig cfg(q, tw, 0.5 + u(rng), tau2, 1.0);
    const LeakConfig leak(tau1);
    const auto code = DigitalCode::from_value(q, 1 + rng() % ((1ULL << q) - 1));
    const LeakyResponse exact(cfg, leak, code);

    const double h = std::min({tau1, tau2, tw});
    const auto fine = simulate_leaky_numeric(cfg, leak, code, std::nullopt, 1e-3 * h);
    const double rel = max_error(fine, exact) / (cfg.v_set() * tau1);
    worst_rel = std::max(worst_rel, rel);
    o.require(rel <= 1e-6, "case " + std::to_string(i) + " discrepancy " + fmt(rel));

    const double e1 = max_error(simulate_leaky_numeric(cfg, leak, code, std::nullopt, h / 16), exact);
    const double e2 = max_error(simulate_leaky_numeric(cfg, leak, code, std::nullopt, h / 32), exact);
    const double order = e1 / e2;
    min_order = std::min(min_order, order);
    max_order = std::max(max_order, order);
    o.require(order >= 12.0 && order <= 20.0, "case " + std::to_string(i) + " halving ratio " + fmt(order));
  }
  if (o.pass) {
    o.detail = "max discrepancy " + fmt(worst_rel) + "*V_set*tau1, halving ratio in [" +
               fmt(min_order) + ", " + fmt(max_order) + "]";
  }
  return o;
}

Outcome all_ones_limit(double tau1, double tau2, double tw, double peak_expected, double t_expected) {
  Outcome o;
  const int q = all_ones_bits(tw, tau1, tau2);
  o.require(q * tw >= 10.0 * std::max(tau1, tau2) - 1e-9, "q*t_w too short");
  const TdacConfig cfg(q, tw, 1.0, tau2, 1.0);
  const auto w = simulate_leaky(cfg, LeakConfig(tau1), DigitalCode::all_ones(q), std::nullopt, 0.001);
  const auto p = peak_of(w);
  const double ev = std::abs(p.value / peak_expected - 1.0);
  const double et = std::abs(p.time / t_expected - 1.0);
  o.require(ev <= 0.01, "peak error " + fmt(ev));
  o.require(et <= 0.02, "peak time error " + fmt(et));
  if (o.pass) o.detail = "q=" + std::to_string(q) + " peak err " + fmt(ev) + " time err " + fmt(et);
  return o;
}

Outcome peak_invariance() {
  Outcome o;
  for (double tau2 : {1.0, 0.5}) {
    std::vector<double> peaks;
    for (double r : {0.01, 0.02, 0.05}) {
      const double tw = r * tau2;
      const int q = all_ones_bits(tw, 1.0, tau2);
      const TdacConfig cfg(q, tw, 1.0, tau2, 1.0);
      peaks.push_back(peak_of(simulate_leaky(cfg, LeakConfig(1.0), DigitalCode::all_ones(q),
                                             std::nullopt, 0.001))
                          .value);
    }
    const auto [lo, hi] = std::minmax_element(peaks.begin(), peaks.end());
    const double spread = (*hi - *lo) / *hi;
    o.require(spread < 0.02, "tau2=" + fmt(tau2) + " spread " + fmt(spread));
    o.detail += (o.detail.empty() ? "" : ", ") + std::string("tau2=") + fmt(tau2) + " spread " + fmt(spread);
  }
  return o;
}

Outcome code_dependent_peaks() {
  Outcome o;
  const double tau1 = 1.0;
  const double tw = 0.01 * tau1;
  const TdacConfig cfg(8, tw, 1.0, tw / ln2, 1.0);
  const LeakConfig leak(tau1);
  const double a = peak_of(simulate_leaky(cfg, leak, DigitalCode::from_string("10101010"), std::nullopt, tw / 8)).value;
  const double b = peak_of(simulate_leaky(cfg, leak, DigitalCode::from_string("01010101"), std::nullopt, tw / 8)).value;
  const double ratio = a / b;
  o.require(ratio >= 1.9 && ratio <= 2.1, "ratio " + fmt(ratio));
  if (o.pass) o.detail = "peak ratio " + fmt(ratio);
  return o;
}

Waveform dense(const std::function<double(double)>& f, double t_end, int n) {
  std::vector<Sample> s;
  for (int i = 0; i <= n; ++i) s.push_back({t_end * i / n, f(t_end * i / n)});
  return Waveform(std::move(s));
}

Outcome fit_recovery() {
  Outcome o;
  const auto a = fit_waveform(dense([](double t) { return alpha_waveform(1.0, 1.0, t); }, 10, 1000), FitModel::Alpha);
  const double ea = std::abs(a.tau1_fit - 1.0);
  o.require(ea <= 1e-4, "alpha tau error " + fmt(ea));

  const auto d = fit_waveform(dense([](double t) { return dual_exp_waveform(1.0, 1.0, 0.5, t); }, 10, 1000),
                              FitModel::DualExponential);
  const double e1 = std::abs(d.tau1_fit - 1.0);
  const double e2 = std::abs(d.tau2_fit / 0.5 - 1.0);
  o.require(e1 <= 1e-4 && e2 <= 1e-4, "dual tau errors " + fmt(e1) + ", " + fmt(e2));

  const double tw = 0.005;
  const int q = all_ones_bits(tw, 1.0, 0.5);
  const auto w = simulate_leaky(TdacConfig(q, tw, 1.0, 0.5, 1.0), LeakConfig(1.0), DigitalCode::all_ones(q),
                                std::nullopt, 0.01);
  const auto s = fit_waveform(w, FitModel::DualExponential);
  const double rms = std::sqrt(s.sse / static_cast<double>(w.size())) / w.peak_value();
  o.require(rms < 0.01, "simulated fit RMS/peak " + fmt(rms));
  if (o.pass) {
    o.detail = "alpha " + fmt(ea) + ", dual " + fmt(std::max(e1, e2)) + ", simulated RMS/peak " + fmt(rms);
  }
  return o;
}

Outcome calibration() {
  Outcome o;
  double worst = 0.0;
  for (double tau2 : {0.1, 1.0, 10.0}) {
    for (int q : {4, 8}) {
      const double tw = calibrate_pulse_width(tau2, q, {0.3 * tau2, 1.2 * tau2});
      const double rel = std::abs(tw / (tau2 * ln2) - 1.0);
      worst = std::max(worst, rel);
      o.require(rel <= 1e-6, "tau2=" + fmt(tau2) + " q=" + std::to_string(q) + " rel " + fmt(rel));
    }
  }
  if (o.pass) o.detail = "max relative error " + fmt(worst);
  return o;
}

Outcome signed_model() {
  Outcome o;
  const SignedTdacConfig base(TdacConfig::from_ratio(8, ln2), 1.0, 1.0, 0.35);
  const auto curve = signed_transfer_curve(base);
  for (std::size_t c = 1; c <= 127; ++c) o.require(curve.entries[c].v_out < 0.35, "code " + std::to_string(c));
  for (std::size_t c = 129; c <= 255; ++c) o.require(curve.entries[c].v_out > 0.35, "code " + std::to_string(c));
  o.require(curve.entries[0].v_out == 0.35 && curve.entries[128].v_out == 0.35, "dual zero not at baseline");

  // Offsets with a zero baseline so that they are exact products.
  const auto a = signed_transfer_curve(SignedTdacConfig(TdacConfig::from_ratio(8, ln2), 1.0, 1.0));
  const auto b = signed_transfer_curve(SignedTdacConfig(TdacConfig::from_ratio(8, ln2), 2.0, 1.0));
  for (std::size_t c = 0; c < 256; ++c) {
    if (c >= 128) {
      o.require(b.entries[c].v_out == 2.0 * a.entries[c].v_out, "positive code " + std::to_string(c));
    } else {
      o.require(b.entries[c].v_out == a.entries[c].v_out, "negative code " + std::to_string(c));
    }
  }
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(f, l);) out.push_back(l);
  return out;
}

Outcome figure_reproduction() {
  Outcome o;
  struct Fig {
    const char* id;
    std::size_t members;
    const char* header;
    std::size_t rows;  // 0: waveform, rows taken from the manifest
  };
  const Fig figs[] = {{"fig2", 3, "code,v_out", 256},  {"fig3a", 3, "t,v", 0}, {"fig3b", 3, "t,v", 0},
                      {"fig3c", 3, "t,v", 0},          {"fig3d", 3, "t,v", 0}, {"fig6-shape", 3, "code,v_out", 256},
                      {"fig7-shape", 5, "t,v", 0}};
  const auto root = fs::temp_directory_path() / "tdac_acceptance_reproduce";
  fs::remove_all(root);
  for (const auto& fig : figs) {
    std::map<std::string, std::string> first_pass;
    for (int pass = 0; pass < 2; ++pass) {
      const auto out_dir = root / std::to_string(pass);
      std::ostringstream out, err;
      const int status = cli::run({"reproduce", fig.id, "--out", out_dir.string()}, out, err);
      o.require(status == 0, std::string(fig.id) + " exit " + std::to_string(status));
      if (status != 0) break;
      const auto dir = out_dir / fig.id;
      const auto manifest = cli::read_key_value_file(dir / "manifest.txt");
      std::size_t csvs = 0;
      for (const auto& e : fs::directory_iterator(dir)) csvs += e.path().extension() == ".csv";
      o.require(csvs == fig.members && manifest.at("members") == std::to_string(fig.members),
                std::string(fig.id) + " has " + std::to_string(csvs) + " CSVs");
      for (std::size_t i = 0; i < fig.members; ++i) {
        const std::string prefix = "member." + std::to_string(i) + ".";
        const auto file = dir / manifest.at(prefix + "file");
        const auto lines = lines_of(file);
        const std::size_t rows = std::stoul(manifest.at(prefix + "rows"));
        o.require(!lines.empty() && lines.front() == fig.header, file.string() + " header");
        o.require(lines.size() == rows + 1, file.string() + " row count");
        if (fig.rows) o.require(rows == fig.rows, file.string() + " expected " + std::to_string(fig.rows) + " rows");
        if (pass == 0) {
          first_pass[file.filename().string()] = slurp(file);
        } else {
          o.require(first_pass[file.filename().string()] == slurp(file), file.string() + " differs on rerun");
        }
      }
      if (pass == 0) {
        first_pass["manifest.txt"] = slurp(dir / "manifest.txt");
      } else {
        o.require(first_pass["manifest.txt"] == slurp(dir / "manifest.txt"), std::string(fig.id) + " manifest differs");
      }
    }
  }
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
    double budget_s;
  };
  const std::vector<Criterion> criteria = {
      {"1 linearity condition at ratio ln 2 (q=8)", linearity_condition, 1.0},
      {"2 monotonicity boundary (q in {2,4,8})", monotonicity_boundary, 1.0},
      {"3 quadrature vs closed form, all 256 codes", oracle_equivalence, 1.0},
      {"4 propagator vs fixed-step RK4 oracle", propagator_vs_oracle, 10.0},
      {"5 alpha-function equivalence", [] { return all_ones_limit(1.0, 1.0, 0.01, std::exp(-1.0), 1.0); }, 0.0},
      {"6 dual-exponential equivalence", [] { return all_ones_limit(1.0, 0.5, 0.005, 0.25, ln2); }, 0.0},
      {"7 peak invariance under t_w/tau2", peak_invariance, 0.0},
      {"8 code-dependent peaks 10101010/01010101", code_dependent_peaks, 0.0},
      {"9 fit recovery", fit_recovery, 0.0},
      {"10 calibration to tau2*ln 2", calibration, 0.0},
      {"11 signed model sign selection and gains", signed_model, 0.0},
      {"12 figure reproduction smoke test", figure_reproduction, 0.0},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      o.pass = false;
      o.detail += (o.detail.empty() ? "" : "; ") + std::string("runtime ") + fmt(secs) + " s over budget";
    }
    failures += !o.pass;
    std::printf("[%s] %s (%.3f s)%s%s\n", o.pass ? "PASS" : "FAIL", c.name, secs,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
