#include "app.hpp"

#include <CLI11.hpp>

#include "experiment.hpp"
#include "io.hpp"
#include "tdac/error.hpp"

namespace tdac::cli {
namespace {

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

// Flags shared by the converter-level subcommands.
constexpr Flag kBaseFlags[] = {
    {"--q", "base.q", "bit count"},
    {"--ratio", "base.ratio", "pulse width over drive time constant, t_w/tau2"},
    {"--tw", "base.tw", "pulse width t_w (instead of --ratio)"},
    {"--tau2", "base.tau2", "drive time constant"},
    {"--vset", "base.vset", "drive amplitude"},
    {"--cout", "base.cout", "output capacitance"},
};

constexpr Flag kSignedFlags[] = {
    {"--gain-pos", "signed.gain_pos", "positive-branch gain"},
    {"--gain-neg", "signed.gain_neg", "negative-branch gain"},
    {"--baseline", "signed.baseline", "output baseline offset"},
};

constexpr Flag kLeakFlags[] = {
    {"--tau1", "leak.tau1", "output leak time constant"},
    {"--v0", "leak.v0", "initial output voltage"},
    {"--t-end", "sampling.t_end", "simulation end time"},
    {"--dt-out", "sampling.dt_out", "output sample spacing (numeric engine step)"},
};

// Keys that are alternatives to each other; a flag for one clears the rest
// when layered over a config file.
const std::vector<std::vector<std::string>> kExclusiveGroups = {{"base.ratio", "base.tw"}};

class Cli {
 public:
  Cli() : app_("Time-domain DAC behavioral simulator", "tdac") {
    app_.require_subcommand(0, 1);
    app_.fallthrough();
    app_.add_option("--config", config_path_, "key=value experiment file");
    add(app_, {"--out", "output.dir", "output directory"});
    app_.add_option("--seed", seed_, "reserved; all computation is deterministic");

    auto* transfer = sub("transfer", "transfer curve and linearity metrics");
    add_all(*transfer, kBaseFlags);
    add_all(*transfer, kSignedFlags);
    add_signed_flag(*transfer);

    auto* waveform = sub("waveform", "leaky-output synaptic waveform");
    add_all(*waveform, kBaseFlags);
    add_all(*waveform, kLeakFlags);
    add_all(*waveform, kSignedFlags);
    add_signed_flag(*waveform);
    add(*waveform, {"--code", "experiment.code", "code, MSB first (or 'ones'/'zeros' with --q)"});
    add(*waveform, {"--engine", "experiment.engine", "analytic or numeric"});

    auto* sweep_ratio = sub("sweep-ratio", "transfer curves over a list of ratios");
    add_all(*sweep_ratio, kBaseFlags);
    add(*sweep_ratio, {"--ratios", "experiment.ratios", "comma-separated t_w/tau2 values"});

    auto* sweep_code = sub("sweep-code", "waveforms over a list of codes");
    add_all(*sweep_code, kBaseFlags);
    add_all(*sweep_code, kLeakFlags);
    add(*sweep_code, {"--codes", "experiment.codes", "comma-separated codes, MSB first"});

    auto* fit = sub("fit", "fit an alpha or dual-exponential model to a t,v CSV");
    add(*fit, {"--input", "experiment.input", "input CSV with header t,v"});
    add(*fit, {"--model", "experiment.model", "alpha or dual"});

    auto* cal = sub("calibrate", "search the pulse width that linearises the converter");
    add(*cal, {"--tau2", "base.tau2", "drive time constant"});
    add(*cal, {"--q", "base.q", "bit count"});
    add(*cal, {"--lo", "calibrate.lo", "lower pulse-width bound"});
    add(*cal, {"--hi", "calibrate.hi", "upper pulse-width bound"});

    auto* rep = sub("reproduce", "emit figure data sets with a manifest");
    rep->add_option_function<std::string>(
           "figure", [this](const std::string& v) { flags_["experiment.figure"] = v; },
           "fig2, fig3a, fig3b, fig3c, fig3d, fig6-shape or fig7-shape")
        ->required();
  }

  int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app_.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out << app_.help();
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n" << app_.help();
      return kExitUsage;
    }

    try {
      Settings settings;
      if (!config_path_.empty()) settings = read_key_value_file(config_path_);
      for (const auto& group : kExclusiveGroups) {
        const bool flagged = std::any_of(group.begin(), group.end(),
                                         [&](const auto& k) { return flags_.count(k) > 0; });
        if (flagged) {
          for (const auto& k : group) settings.erase(k);
        }
      }
      for (const auto& [k, v] : flags_) settings[k] = v;
      if (!kind_.empty()) {
        settings["experiment.kind"] = kind_;
      } else if (!settings.count("experiment.kind")) {
        err << "error: no subcommand and no experiment.kind in a config file\n" << app_.help();
        return kExitUsage;
      }
      const auto config = ExperimentConfig::from_settings(settings);
      return run_experiment(config, out);
    } catch (const UsageError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const tdac::Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitInput;
    } catch (const std::filesystem::filesystem_error& e) {
      err << "error: " << e.what() << "\n";
      return kExitInput;
    }
  }

 private:
  CLI::App* sub(const char* name, const char* help) {
    auto* s = app_.add_subcommand(name, help);
    s->fallthrough();
    s->callback([this, name] { kind_ = name; });
    return s;
  }

  void add(CLI::App& app, const Flag& f) {
    const std::string key = f.key;
    app.add_option_function<std::string>(
        f.name, [this, key](const std::string& v) { flags_[key] = v; }, f.help);
  }

  template <std::size_t N>
  void add_all(CLI::App& app, const Flag (&flags)[N]) {
    for (const auto& f : flags) add(app, f);
  }

  void add_signed_flag(CLI::App& app) {
    app.add_flag_callback(
        "--signed", [this] { flags_["signed.enabled"] = "true"; },
        "sign + 7 magnitude converter (8-bit codes)");
  }

  CLI::App app_;
  std::string config_path_;
  long seed_ = 0;
  std::string kind_;
  Settings flags_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli;
  return cli.run(args, out, err);
}

}  // namespace tdac::cli
