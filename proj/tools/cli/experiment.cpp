#include "experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "io.hpp"
#include "tdac/analysis.hpp"
#include "tdac/calibrate.hpp"
#include "tdac/convert.hpp"
#include "tdac/error.hpp"
#include "tdac/fit.hpp"

namespace tdac::cli {
namespace {

constexpr double kLn2 = std::numbers::ln2;

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::Transfer, "transfer"},     {ExperimentKind::Waveform, "waveform"},
    {ExperimentKind::SweepRatio, "sweep-ratio"}, {ExperimentKind::SweepCode, "sweep-code"},
    {ExperimentKind::Fit, "fit"},               {ExperimentKind::Calibrate, "calibrate"},
    {ExperimentKind::Reproduce, "reproduce"},
};

double to_double(const std::string& key, const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno != 0 || !std::isfinite(v)) {
    throw InputError("'" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno != 0 || v < INT32_MIN ||
      v > INT32_MAX) {
    throw InputError("'" + key + "' expects an integer, got '" + text + "'");
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw InputError("'" + key + "' expects true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------
// CSV bodies

std::string transfer_csv(const TransferCurve& curve) {
  std::string s = "code,v_out\n";
  for (const auto& e : curve.entries) {
    s += std::to_string(e.code);
    s += ',';
    s += format_number(e.v_out);
    s += '\n';
  }
  return s;
}

std::string waveform_csv(const Waveform& w) {
  std::string s = "t,v\n";
  for (const auto& x : w.samples()) {
    s += format_number(x.t);
    s += ',';
    s += format_number(x.v);
    s += '\n';
  }
  return s;
}

// ---------------------------------------------------------------------------
// Sweep members and manifests

struct Member {
  std::string file;
  std::string body;
  std::size_t rows;
  std::vector<std::pair<std::string, std::string>> params;
};

void write_members(const std::filesystem::path& dir, const std::vector<Member>& members,
                   const std::vector<std::pair<std::string, std::string>>& header,
                   std::ostream& out) {
  std::string manifest;
  for (const auto& [k, v] : header) manifest += k + "=" + v + "\n";
  manifest += "members=" + std::to_string(members.size()) + "\n";
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& m = members[i];
    write_file_atomic(dir / m.file, m.body);
    const std::string prefix = "member." + std::to_string(i) + ".";
    manifest += prefix + "file=" + m.file + "\n";
    manifest += prefix + "rows=" + std::to_string(m.rows) + "\n";
    for (const auto& [k, v] : m.params) manifest += prefix + k + "=" + v + "\n";
    out << "wrote " << (dir / m.file).string() << "\n";
  }
  write_file_atomic(dir / "manifest.txt", manifest);
  out << "manifest=" << (dir / "manifest.txt").string() << "\n";
}

std::string member_name(const std::string& prefix, std::size_t i) {
  return prefix + "_" + (i < 10 ? "0" : "") + std::to_string(i) + ".csv";
}

std::vector<std::pair<std::string, std::string>> config_params(const TdacConfig& c) {
  return {{"base.q", std::to_string(c.bits())},
          {"base.tw", format_number(c.pulse_width())},
          {"base.tau2", format_number(c.tau2())},
          {"base.vset", format_number(c.v_set())},
          {"base.cout", format_number(c.c_out())}};
}

// Long all-ones codes are recorded in the form parse_code() accepts with q.
std::string code_text(const DigitalCode& code) {
  if (code.width() > 16 && code == DigitalCode::all_ones(code.width())) return "ones";
  return code.to_string();
}

Member transfer_member(const std::string& file, const TdacConfig& config) {
  const auto curve = transfer_curve(config);
  const auto rep = linearity_report(curve);
  auto params = config_params(config);
  params.emplace_back("kind", "transfer");
  params.emplace_back("monotone", bool_text(rep.monotone));
  params.emplace_back("max_abs_inl", format_number(rep.max_abs_inl));
  params.emplace_back("max_abs_dnl", format_number(rep.max_abs_dnl));
  return {file, transfer_csv(curve), curve.entries.size(), std::move(params)};
}

Member waveform_member(const std::string& file, const TdacConfig& config, const LeakConfig& leak,
                       const DigitalCode& code, std::optional<double> t_end, double dt_out) {
  const auto w = simulate_leaky(config, leak, code, t_end, dt_out);
  const auto peak = peak_of(w);
  auto params = config_params(config);
  params.emplace_back("kind", "waveform");
  params.emplace_back("code", code_text(code));
  params.emplace_back("leak.tau1", format_number(leak.tau1()));
  params.emplace_back("leak.v0", format_number(leak.v0()));
  params.emplace_back("sampling.dt_out", format_number(dt_out));
  params.emplace_back("sampling.t_end", format_number(t_end.value_or(default_t_end(config, leak))));
  params.emplace_back("engine", "analytic");
  params.emplace_back("peak_time", format_number(peak.time));
  params.emplace_back("peak_value", format_number(peak.value));
  return {file, waveform_csv(w), w.size(), std::move(params)};
}

std::vector<std::pair<std::string, std::string>> signed_params(const SignedTdacConfig& c) {
  auto p = config_params(c.base());
  p.emplace_back("signed.gain_pos", format_number(c.gain_pos()));
  p.emplace_back("signed.gain_neg", format_number(c.gain_neg()));
  p.emplace_back("signed.baseline", format_number(c.baseline()));
  return p;
}

int all_ones_bits(double tw, double tau1, double tau2) {
  return static_cast<int>(std::ceil(10.0 * std::max(tau1, tau2) / tw - 1e-9));
}

// ---------------------------------------------------------------------------
// Experiments

void print_report(std::ostream& out, const std::string& prefix, const LinearityReport& r) {
  out << prefix << "lsb_step=" << format_number(r.lsb_step) << "\n"
      << prefix << "max_abs_inl=" << format_number(r.max_abs_inl) << "\n"
      << prefix << "max_abs_dnl=" << format_number(r.max_abs_dnl) << "\n"
      << prefix << "monotone=" << bool_text(r.monotone) << "\n";
}

int run_transfer(const ExperimentConfig& cfg, std::ostream& out) {
  const auto path = cfg.out_dir / "transfer.csv";
  if (cfg.is_signed) {
    const auto sc = cfg.signed_config();
    const auto curve = signed_transfer_curve(sc);
    write_file_atomic(path, transfer_csv(curve));
    out << "ratio=" << format_number(sc.base().ratio()) << "\n";
    print_report(out, "negative.", linearity_report(curve, 0, 128));
    print_report(out, "positive.", linearity_report(curve, 128, 128));
  } else {
    const auto config = cfg.tdac_config(8);
    const auto curve = transfer_curve(config);
    write_file_atomic(path, transfer_csv(curve));
    const auto ratio = linearity_ratio(config);
    out << "ratio=" << format_number(ratio.ratio) << "\n"
        << "classification=" << to_string(ratio.classification) << "\n";
    print_report(out, "", linearity_report(curve));
  }
  out << "rows=" << (std::size_t{1} << (cfg.is_signed ? 8 : cfg.q.value_or(8))) << "\n"
      << "csv=" << path.string() << "\n";
  return kExitOk;
}

int run_waveform(const ExperimentConfig& cfg, std::ostream& out) {
  if (!cfg.code) throw InputError("waveform needs a code (--code or experiment.code)");
  const auto code = cfg.parse_code(*cfg.code);
  const auto leak = cfg.leak_config();
  Waveform w({{0.0, 0.0}});
  if (cfg.is_signed) {
    w = simulate_signed_leaky(cfg.signed_config(), leak, code, cfg.t_end, cfg.dt_out);
  } else {
    const auto config = cfg.tdac_config(code.width());
    if (cfg.engine == "analytic") {
      w = simulate_leaky(config, leak, code, cfg.t_end, cfg.dt_out);
    } else if (cfg.engine == "numeric") {
      w = simulate_leaky_numeric(config, leak, code, cfg.t_end, cfg.dt_out);
    } else {
      throw UsageError("engine must be 'analytic' or 'numeric', got '" + cfg.engine + "'");
    }
  }
  const auto path = cfg.out_dir / "waveform.csv";
  write_file_atomic(path, waveform_csv(w));
  const auto peak = peak_of(w);
  out << "peak_time=" << format_number(peak.time) << "\n"
      << "peak_value=" << format_number(peak.value) << "\n"
      << "rows=" << w.size() << "\n"
      << "csv=" << path.string() << "\n";
  return kExitOk;
}

int run_fit(const ExperimentConfig& cfg, std::ostream& out) {
  if (!cfg.input) throw InputError("fit needs an input CSV (--input)");
  const std::string model_name = cfg.model.value_or("dual");
  FitModel model;
  if (model_name == "alpha") {
    model = FitModel::Alpha;
  } else if (model_name == "dual") {
    model = FitModel::DualExponential;
  } else {
    throw UsageError("model must be 'alpha' or 'dual', got '" + model_name + "'");
  }
  const Waveform w(read_waveform_csv(*cfg.input));
  const auto r = fit_waveform(w, model);
  out << "model=" << to_string(r.model) << "\n"
      << "v_set=" << format_number(r.v_set_fit) << "\n"
      << "tau1=" << format_number(r.tau1_fit) << "\n"
      << "tau2=" << format_number(r.tau2_fit) << "\n"
      << "sse=" << format_number(r.sse) << "\n"
      << "rms=" << format_number(std::sqrt(r.sse / static_cast<double>(w.size()))) << "\n"
      << "converged=" << bool_text(r.converged) << "\n"
      << "iterations=" << r.iterations << "\n";
  return r.converged ? kExitOk : kExitNotConverged;
}

int run_calibrate(const ExperimentConfig& cfg, std::ostream& out) {
  const int q = cfg.q.value_or(8);
  const double lo = cfg.lo.value_or(0.3 * cfg.tau2);
  const double hi = cfg.hi.value_or(1.2 * cfg.tau2);
  const auto c = calibrate(cfg.tau2, q, {lo, hi});
  out << "t_w=" << format_number(c.pulse_width) << "\n"
      << "ratio=" << format_number(c.pulse_width / cfg.tau2) << "\n"
      << "max_abs_inl=" << format_number(c.max_abs_inl) << "\n";
  return kExitOk;
}

int run_sweep_ratio(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.ratios.empty()) throw InputError("sweep-ratio needs a ratio list (--ratios)");
  const int q = cfg.q.value_or(8);
  std::vector<Member> members;
  for (std::size_t i = 0; i < cfg.ratios.size(); ++i) {
    const TdacConfig c(q, cfg.ratios[i] * cfg.tau2, cfg.v_set, cfg.tau2, cfg.c_out);
    members.push_back(transfer_member(member_name("ratio", i), c));
  }
  write_members(cfg.out_dir, members, {{"experiment.kind", "sweep-ratio"}}, out);
  return kExitOk;
}

int run_sweep_code(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.codes.empty()) throw InputError("sweep-code needs a code list (--codes)");
  std::vector<Member> members;
  for (std::size_t i = 0; i < cfg.codes.size(); ++i) {
    const auto code = cfg.parse_code(cfg.codes[i]);
    members.push_back(waveform_member(member_name("code", i), cfg.tdac_config(code.width()),
                                      cfg.leak_config(), code, cfg.t_end, cfg.dt_out));
  }
  write_members(cfg.out_dir, members, {{"experiment.kind", "sweep-code"}}, out);
  return kExitOk;
}

int run_reproduce(const ExperimentConfig& cfg, std::ostream& out) {
  if (!cfg.figure) throw UsageError("reproduce needs a figure id");
  const std::string& fig = *cfg.figure;
  const auto dir = cfg.out_dir / fig;
  std::vector<Member> members;

  if (fig == "fig2") {
    const double ratios[] = {0.5, kLn2, 0.9};
    for (std::size_t i = 0; i < 3; ++i) {
      members.push_back(transfer_member(member_name(fig, i), TdacConfig::from_ratio(8, ratios[i])));
    }
  } else if (fig == "fig3a" || fig == "fig3c") {
    const double tau1 = 1.0;
    const double tau2 = fig == "fig3a" ? 1.0 : 0.5;
    const double ratios[] = {0.01, 0.02, 0.05};
    for (std::size_t i = 0; i < 3; ++i) {
      const double tw = ratios[i] * tau2;
      const int q = all_ones_bits(tw, tau1, tau2);
      members.push_back(waveform_member(member_name(fig, i), TdacConfig(q, tw, 1.0, tau2, 1.0),
                                        LeakConfig(tau1), DigitalCode::all_ones(q), std::nullopt,
                                        0.01));
    }
  } else if (fig == "fig3b" || fig == "fig3d") {
    const double tau2 = fig == "fig3b" ? 1.0 : 0.5;
    const char* codes[] = {"11111111", "10101010", "01010101"};
    for (std::size_t i = 0; i < 3; ++i) {
      members.push_back(waveform_member(member_name(fig, i), TdacConfig::from_ratio(8, kLn2, tau2),
                                        LeakConfig(1.0), DigitalCode::from_string(codes[i]),
                                        std::nullopt, 0.01));
    }
  } else if (fig == "fig6-shape") {
    const std::pair<double, double> gains[] = {{1.0, 1.0}, {2.0, 1.0}, {1.0, 2.0}};
    for (std::size_t i = 0; i < 3; ++i) {
      const SignedTdacConfig sc(TdacConfig::from_ratio(8, kLn2), gains[i].first, gains[i].second);
      const auto curve = signed_transfer_curve(sc);
      auto params = signed_params(sc);
      params.emplace_back("kind", "signed-transfer");
      members.push_back({member_name(fig, i), transfer_csv(curve), curve.entries.size(), params});
    }
  } else if (fig == "fig7-shape") {
    const SignedTdacConfig sc(TdacConfig::from_ratio(8, kLn2));
    const LeakConfig leak(1.0);
    const char* codes[] = {"11111111", "10101010", "11010101", "01111111", "00101010"};
    for (std::size_t i = 0; i < 5; ++i) {
      const auto code = DigitalCode::from_string(codes[i]);
      const auto w = simulate_signed_leaky(sc, leak, code, std::nullopt, 0.01);
      auto params = signed_params(sc);
      params.emplace_back("kind", "signed-waveform");
      params.emplace_back("code", codes[i]);
      params.emplace_back("leak.tau1", format_number(leak.tau1()));
      params.emplace_back("leak.v0", format_number(leak.v0()));
      params.emplace_back("sampling.dt_out", format_number(0.01));
      params.emplace_back("sampling.t_end",
                          format_number(default_t_end(sc.magnitude_config(), leak)));
      members.push_back({member_name(fig, i), waveform_csv(w), w.size(), params});
    }
  } else {
    throw UsageError("unknown figure id '" + fig +
                     "' (expected fig2, fig3a, fig3b, fig3c, fig3d, fig6-shape, fig7-shape)");
  }
  write_members(dir, members, {{"experiment.kind", "reproduce"}, {"figure", fig}}, out);
  return kExitOk;
}

}  // namespace

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (const auto& k : kKinds) {
    if (name == k.name) return k.kind;
  }
  return std::nullopt;
}

const char* to_string(ExperimentKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "?";
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "experiment.kind",  "experiment.code",   "experiment.codes",   "experiment.engine",
      "experiment.model", "experiment.input",  "experiment.figure",  "experiment.ratios",
      "experiment.seed",  "base.q",            "base.ratio",         "base.tw",
      "base.tau2",        "base.vset",         "base.cout",          "leak.tau1",
      "leak.v0",          "signed.enabled",    "signed.gain_pos",    "signed.gain_neg",
      "signed.baseline",  "sampling.dt_out",   "sampling.t_end",     "sampling.steps_per_slot",
      "calibrate.lo",     "calibrate.hi",      "output.dir",
  };
  return keys;
}

ExperimentConfig ExperimentConfig::from_settings(const Settings& s) {
  const auto& keys = known_keys();
  for (const auto& [k, v] : s) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw InputError("unknown configuration key '" + k + "'");
    }
  }
  auto get = [&](const char* key) -> const std::string* {
    const auto it = s.find(key);
    return it == s.end() ? nullptr : &it->second;
  };

  ExperimentConfig c;
  if (const auto* v = get("experiment.kind")) {
    const auto kind = parse_kind(*v);
    if (!kind) throw UsageError("unknown experiment kind '" + *v + "'");
    c.kind = *kind;
  }
  if (const auto* v = get("experiment.code")) c.code = *v;
  if (const auto* v = get("experiment.codes")) c.codes = split_list(*v);
  if (const auto* v = get("experiment.engine")) c.engine = *v;
  if (const auto* v = get("experiment.model")) c.model = *v;
  if (const auto* v = get("experiment.input")) c.input = *v;
  if (const auto* v = get("experiment.figure")) c.figure = *v;
  if (const auto* v = get("experiment.seed")) to_int("experiment.seed", *v);  // reserved
  if (const auto* v = get("experiment.ratios")) {
    for (const auto& item : split_list(*v)) c.ratios.push_back(to_double("experiment.ratios", item));
  }
  if (const auto* v = get("base.q")) c.q = to_int("base.q", *v);
  if (const auto* v = get("base.ratio")) c.ratio = to_double("base.ratio", *v);
  if (const auto* v = get("base.tw")) c.pulse_width = to_double("base.tw", *v);
  if (c.ratio && c.pulse_width) throw InputError("give either base.ratio or base.tw, not both");
  if (const auto* v = get("base.tau2")) c.tau2 = to_double("base.tau2", *v);
  if (const auto* v = get("base.vset")) c.v_set = to_double("base.vset", *v);
  if (const auto* v = get("base.cout")) c.c_out = to_double("base.cout", *v);
  if (const auto* v = get("leak.tau1")) c.tau1 = to_double("leak.tau1", *v);
  if (const auto* v = get("leak.v0")) c.v0 = to_double("leak.v0", *v);
  if (const auto* v = get("signed.enabled")) c.is_signed = to_bool("signed.enabled", *v);
  if (const auto* v = get("signed.gain_pos")) c.gain_pos = to_double("signed.gain_pos", *v);
  if (const auto* v = get("signed.gain_neg")) c.gain_neg = to_double("signed.gain_neg", *v);
  if (const auto* v = get("signed.baseline")) c.baseline = to_double("signed.baseline", *v);
  if (const auto* v = get("sampling.dt_out")) c.dt_out = to_double("sampling.dt_out", *v);
  if (const auto* v = get("sampling.t_end")) c.t_end = to_double("sampling.t_end", *v);
  if (const auto* v = get("sampling.steps_per_slot")) {
    c.steps_per_slot = to_int("sampling.steps_per_slot", *v);
  }
  if (const auto* v = get("calibrate.lo")) c.lo = to_double("calibrate.lo", *v);
  if (const auto* v = get("calibrate.hi")) c.hi = to_double("calibrate.hi", *v);
  if (const auto* v = get("output.dir")) c.out_dir = *v;

  // Surface type-invariant violations before any work is done.
  if (c.q && *c.q < 1) throw InputError("base.q must be >= 1");
  (void)LeakConfig(c.tau1, c.v0);
  if (!(c.dt_out > 0.0)) throw InputError("sampling.dt_out must be positive");
  if (c.t_end && !(*c.t_end > 0.0)) throw InputError("sampling.t_end must be positive");
  return c;
}

TdacConfig ExperimentConfig::tdac_config(int default_bits) const {
  const int bits = q.value_or(default_bits);
  const double tw = pulse_width ? *pulse_width : ratio.value_or(kLn2) * tau2;
  return TdacConfig(bits, tw, v_set, tau2, c_out);
}

SignedTdacConfig ExperimentConfig::signed_config() const {
  if (q && *q != SignedTdacConfig::kBits) throw InputError("signed converter requires q = 8");
  return SignedTdacConfig(tdac_config(SignedTdacConfig::kBits), gain_pos, gain_neg, baseline);
}

DigitalCode ExperimentConfig::parse_code(const std::string& text) const {
  if (text == "ones" || text == "zeros") {
    if (!q) throw InputError("code '" + text + "' needs an explicit bit count (--q)");
    return text == "ones" ? DigitalCode::all_ones(*q) : DigitalCode::all_zeros(*q);
  }
  auto code = DigitalCode::from_string(text);
  if (q && code.width() != *q) {
    throw InputError("code '" + text + "' has " + std::to_string(code.width()) +
                     " bits but q = " + std::to_string(*q));
  }
  return code;
}

int run_experiment(const ExperimentConfig& config, std::ostream& out) {
  switch (config.kind) {
    case ExperimentKind::Transfer: return run_transfer(config, out);
    case ExperimentKind::Waveform: return run_waveform(config, out);
    case ExperimentKind::SweepRatio: return run_sweep_ratio(config, out);
    case ExperimentKind::SweepCode: return run_sweep_code(config, out);
    case ExperimentKind::Fit: return run_fit(config, out);
    case ExperimentKind::Calibrate: return run_calibrate(config, out);
    case ExperimentKind::Reproduce: return run_reproduce(config, out);
  }
  throw UsageError("unhandled experiment kind");
}

}  // namespace tdac::cli
