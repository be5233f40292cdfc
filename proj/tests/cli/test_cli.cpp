#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "app.hpp"
#include "io.hpp"
#include "tdac/leaky.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
  std::map<std::string, std::string> kv;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r{tdac::cli::run(args, out, err), out.str(), err.str(), {}};
  std::istringstream lines(r.out);
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) r.kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return r;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("tdac_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
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

double num(const Result& r, const std::string& key) {
  REQUIRE(r.kv.count(key));
  return std::stod(r.kv.at(key));
}

}  // namespace

TEST_CASE("transfer subcommand") {
  const auto dir = scratch("transfer");
  SUBCASE("near ln 2") {
    const auto r = run({"transfer", "--q", "8", "--ratio", "0.6931472", "--out", dir.string()});
    CHECK(r.status == 0);
    CHECK(r.kv.at("monotone") == "true");
    CHECK(num(r, "max_abs_inl") < 1e-5);
    CHECK(lines_of(dir / "transfer.csv").size() == 257);
    CHECK(lines_of(dir / "transfer.csv").front() == "code,v_out");
  }
  SUBCASE("exactly ln 2") {
    const auto r = run({"transfer", "--q", "8", "--out", dir.string()});
    CHECK(r.kv.at("classification") == "at-ln2");
    CHECK(num(r, "max_abs_inl") < 1e-9);
  }
  SUBCASE("below ln 2") {
    const auto r = run({"transfer", "--q", "8", "--ratio", "0.5", "--out", dir.string()});
    CHECK(r.status == 0);
    CHECK(r.kv.at("monotone") == "false");
  }
  SUBCASE("single bit") {
    const auto r = run({"transfer", "--q", "1", "--ratio", "1.0", "--out", dir.string()});
    CHECK(r.status == 0);
    CHECK(lines_of(dir / "transfer.csv").size() == 3);
  }
  SUBCASE("signed") {
    const auto r = run({"transfer", "--signed", "--gain-pos", "2", "--out", dir.string()});
    CHECK(r.status == 0);
    CHECK(num(r, "positive.max_abs_inl") < 1e-9);
    CHECK(num(r, "negative.max_abs_inl") < 1e-9);
    const auto rows = lines_of(dir / "transfer.csv");
    CHECK(rows.size() == 257);
    CHECK(rows[1] == "0,0");
    CHECK(rows[129] == "128,0");
  }
  SUBCASE("errors") {
    CHECK(run({"transfer", "--q", "8", "--ratio", "-1", "--out", dir.string()}).status == 1);
    CHECK(run({"transfer", "--q", "8", "--ratio", "x", "--out", dir.string()}).status == 1);
    CHECK(run({"transfer", "--q", "8", "--ratio", "0.5", "--tw", "0.5"}).status == 1);
    CHECK(run({"transfer", "--nope"}).status == 2);
    CHECK(run({}).status == 2);
  }
}

TEST_CASE("waveform subcommand") {
  const auto dir = scratch("waveform");
  SUBCASE("all-ones limit matches the dual exponential peak") {
    const std::string ones(2000, '1');
    const auto r = run({"waveform", "--code", ones, "--tau1", "1", "--tau2", "0.5", "--tw", "0.005",
                        "--dt-out", "0.002", "--out", dir.string()});
    REQUIRE(r.status == 0);
    CHECK(num(r, "peak_value") == doctest::Approx(0.25).epsilon(0.01));
    CHECK(num(r, "peak_time") == doctest::Approx(std::numbers::ln2).epsilon(0.02));
    const auto r2 = run({"waveform", "--code", "ones", "--q", "2000", "--tau1", "1", "--tau2",
                         "0.5", "--tw", "0.005", "--dt-out", "0.002", "--out", dir.string()});
    CHECK(r2.out == r.out);
  }
  SUBCASE("all-zero code gives a zero column") {
    const auto r = run({"waveform", "--code", "00000000", "--tw", "0.1", "--out", dir.string()});
    REQUIRE(r.status == 0);
    const auto rows = lines_of(dir / "waveform.csv");
    CHECK(rows.front() == "t,v");
    for (std::size_t i = 1; i < rows.size(); ++i) REQUIRE(rows[i].substr(rows[i].find(',')) == ",0");
  }
  SUBCASE("alternating codes differ") {
    const auto a = run({"waveform", "--code", "10101010", "--tw", "0.1", "--out", dir.string()});
    const auto b = run({"waveform", "--code", "01010101", "--tw", "0.1", "--out", dir.string()});
    CHECK(num(a, "peak_value") != num(b, "peak_value"));
  }
  SUBCASE("numeric engine agrees with the analytic one") {
    const auto a = run({"waveform", "--code", "1011", "--tw", "0.5", "--dt-out", "0.005", "--out", dir.string()});
    const auto n = run({"waveform", "--code", "1011", "--tw", "0.5", "--dt-out", "0.005", "--engine",
                        "numeric", "--out", dir.string()});
    REQUIRE(n.status == 0);
    CHECK(num(n, "peak_value") == doctest::Approx(num(a, "peak_value")).epsilon(1e-9));
    CHECK(run({"waveform", "--code", "1011", "--tw", "0.5", "--dt-out", "0.1", "--engine", "numeric",
               "--out", dir.string()})
              .status == 1);
    CHECK(run({"waveform", "--code", "1011", "--engine", "euler", "--out", dir.string()}).status == 2);
  }
  SUBCASE("signed waveform") {
    const auto p = run({"waveform", "--signed", "--code", "11111111", "--out", dir.string()});
    const auto n = run({"waveform", "--signed", "--code", "01111111", "--out", dir.string()});
    CHECK(num(p, "peak_value") > 0.0);
    CHECK(num(n, "peak_value") == 0.0);  // starts at zero and only goes down
  }
  SUBCASE("errors") {
    CHECK(run({"waveform", "--code", "1010", "--q", "8", "--out", dir.string()}).status == 1);
    CHECK(run({"waveform", "--code", "ones", "--out", dir.string()}).status == 1);
    CHECK(run({"waveform", "--code", "10x0", "--out", dir.string()}).status == 1);
    CHECK(run({"waveform", "--out", dir.string()}).status == 1);
  }
}

TEST_CASE("fit subcommand") {
  const auto dir = scratch("fit");
  auto write_csv = [&](const std::string& name, auto f) {
    std::string s = "t,v\n";
    for (int i = 0; i <= 600; ++i) {
      const double t = i * 0.02;
      s += tdac::cli::format_number(t) + "," + tdac::cli::format_number(f(t)) + "\n";
    }
    tdac::cli::write_file_atomic(dir / name, s);
    return (dir / name).string();
  };
  const auto dual = write_csv("dual.csv", [](double t) { return tdac::dual_exp_waveform(1, 1, 0.5, t); });

  const auto d = run({"fit", "--input", dual, "--model", "dual"});
  CHECK(d.status == 0);
  CHECK(d.kv.at("converged") == "true");
  CHECK(num(d, "tau1") == doctest::Approx(1.0).epsilon(0.01));
  CHECK(num(d, "tau2") == doctest::Approx(0.5).epsilon(0.01));

  const auto a = run({"fit", "--input", dual, "--model", "alpha"});
  CHECK(a.status == 0);
  CHECK(num(a, "sse") > num(d, "sse"));

  const auto flat = write_csv("flat.csv", [](double) { return 0.0; });
  CHECK(run({"fit", "--input", flat, "--model", "dual"}).status == 1);

  tdac::cli::write_file_atomic(dir / "bad.csv", "t,v\n0,0\n0.1,0.2\n0.2;0.3\n");
  const auto bad = run({"fit", "--input", (dir / "bad.csv").string()});
  CHECK(bad.status == 1);
  CHECK(bad.err.find(":4:") != std::string::npos);

  CHECK(run({"fit", "--input", dual, "--model", "cubic"}).status == 2);
  CHECK(run({"fit", "--input", (dir / "missing.csv").string()}).status == 1);
}

TEST_CASE("calibrate subcommand") {
  const auto r = run({"calibrate", "--tau2", "1", "--q", "8", "--lo", "0.3", "--hi", "1.2"});
  CHECK(r.status == 0);
  CHECK(std::abs(num(r, "t_w") - 0.693147) <= 1e-6);
  const auto r2 = run({"calibrate", "--tau2", "2", "--q", "8", "--lo", "0.6", "--hi", "2.4"});
  CHECK(std::abs(num(r2, "t_w") - 1.386294) <= 2e-6);
  CHECK(run({"calibrate", "--tau2", "1", "--q", "8", "--lo", "0.8", "--hi", "1.2"}).status == 1);
}

TEST_CASE("config file and flags are equivalent") {
  const auto dir = scratch("config");
  const auto a_dir = dir / "a";
  const auto b_dir = dir / "b";
  tdac::cli::write_file_atomic(dir / "exp.cfg",
                               "# waveform from a file\n"
                               "experiment.kind = waveform\n"
                               "experiment.code = 10110011\n"
                               "base.tw = 0.2\n"
                               "base.tau2 = 0.8\n"
                               "leak.tau1 = 1.5\n"
                               "sampling.dt_out = 0.05\n"
                               "output.dir = " + a_dir.string() + "\n");
  const auto from_file = run({"--config", (dir / "exp.cfg").string()});
  REQUIRE(from_file.status == 0);
  const auto from_flags = run({"waveform", "--code", "10110011", "--tw", "0.2", "--tau2", "0.8",
                               "--tau1", "1.5", "--dt-out", "0.05", "--out", b_dir.string()});
  REQUIRE(from_flags.status == 0);
  CHECK(slurp(a_dir / "waveform.csv") == slurp(b_dir / "waveform.csv"));

  // Flags override file values; --ratio replaces the file's base.tw.
  const auto overridden = run({"waveform", "--config", (dir / "exp.cfg").string(), "--ratio", "0.25",
                               "--out", b_dir.string()});
  REQUIRE(overridden.status == 0);
  const auto direct = run({"waveform", "--code", "10110011", "--tw", "0.2", "--tau2", "0.8", "--tau1",
                           "1.5", "--dt-out", "0.05", "--out", a_dir.string()});
  CHECK(overridden.kv.at("peak_value") == direct.kv.at("peak_value"));

  tdac::cli::write_file_atomic(dir / "typo.cfg", "experiment.kind=transfer\nbase.qq=8\n");
  const auto typo = run({"--config", (dir / "typo.cfg").string()});
  CHECK(typo.status == 1);
  CHECK(typo.err.find("base.qq") != std::string::npos);

  tdac::cli::write_file_atomic(dir / "noeq.cfg", "experiment.kind=transfer\nbase.q 8\n");
  CHECK(run({"--config", (dir / "noeq.cfg").string()}).err.find(":2:") != std::string::npos);

  tdac::cli::write_file_atomic(dir / "nokind.cfg", "base.q=8\n");
  CHECK(run({"--config", (dir / "nokind.cfg").string()}).status == 2);
}

TEST_CASE("sweeps write members and a manifest") {
  const auto dir = scratch("sweeps");
  const auto r = run({"sweep-ratio", "--q", "6", "--ratios", "0.5,0.7,0.9", "--out", dir.string()});
  REQUIRE(r.status == 0);
  const auto manifest = tdac::cli::read_key_value_file(dir / "manifest.txt");
  CHECK(manifest.at("members") == "3");
  CHECK(manifest.at("member.1.base.tw") == "0.69999999999999996");
  CHECK(lines_of(dir / "ratio_02.csv").size() == 65);

  const auto c = run({"sweep-code", "--codes", "1100,0011", "--tw", "0.3", "--out", (dir / "c").string()});
  REQUIRE(c.status == 0);
  const auto m2 = tdac::cli::read_key_value_file(dir / "c" / "manifest.txt");
  CHECK(m2.at("member.1.code") == "0011");
  CHECK(std::to_string(lines_of(dir / "c" / "code_01.csv").size() - 1) == m2.at("member.1.rows"));
}

TEST_CASE("reproduce rejects unknown figures") {
  CHECK(run({"reproduce", "fig4"}).status == 2);
  CHECK(run({"reproduce"}).status == 2);
}

TEST_CASE("installed binary honours the exit-code contract") {
  const std::string bin = TDAC_CLI_PATH;
  const auto dir = scratch("binary");
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " > " + (dir / "log").string() + " 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status("transfer --q 4 --out " + dir.string()) == 0);
  CHECK(status("transfer --q 0 --out " + dir.string()) == 1);
  CHECK(status("transfer --frobnicate") == 2);
  CHECK(status("reproduce fig99 --out " + dir.string()) == 2);
}
