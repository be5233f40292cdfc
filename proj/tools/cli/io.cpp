#include "io.hpp"

#include <fmt/format.h>

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tdac/error.hpp"

namespace tdac::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno == 0;
}

}  // namespace

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot open " + tmp.string() + " for writing");
    f << content;
    if (!f.flush()) throw InputError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<Sample> read_waveform_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path.string());
  std::string line;
  int lineno = 0;
  std::vector<Sample> out;
  while (std::getline(f, line)) {
    ++lineno;
    const auto text = trim(line);
    if (lineno == 1) {
      if (text != "t,v") throw InputError(path.string() + ":1: expected header 't,v'");
      continue;
    }
    if (text.empty()) continue;
    const auto comma = text.find(',');
    Sample s{};
    if (comma == std::string::npos || !parse_double(trim(text.substr(0, comma)), s.t) ||
        !parse_double(trim(text.substr(comma + 1)), s.v)) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": malformed row '" + text +
                       "'");
    }
    if (!out.empty() && !(s.t > out.back().t)) {
      throw InputError(path.string() + ":" + std::to_string(lineno) +
                       ": time values must be strictly increasing");
    }
    out.push_back(s);
  }
  if (lineno == 0) throw InputError(path.string() + ": empty file");
  return out;
}

std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open config file " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    const auto where = path.string() + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw InputError(where + ": expected key=value");
    auto key = trim(text.substr(0, eq));
    if (key.empty()) throw InputError(where + ": empty key");
    if (!kv.emplace(key, trim(text.substr(eq + 1))).second) {
      throw InputError(where + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

}  // namespace tdac::cli
