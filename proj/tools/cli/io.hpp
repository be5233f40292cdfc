#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tdac/waveform.hpp"

namespace tdac::cli {

/// Shortest exact text for a double: 17 significant digits, '.' separator.
std::string format_number(double x);

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Reads a `t,v` CSV with a one-line header. Throws InputError naming the
/// offending line.
std::vector<Sample> read_waveform_csv(const std::filesystem::path& path);

/// key=value lines; '#' starts a comment; blank lines ignored. Duplicate keys
/// and lines without '=' are errors reported with their line number.
std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path);

}  // namespace tdac::cli
