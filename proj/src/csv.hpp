#pragma once

// Minimal CSV helpers shared by the readers and writers. Fields may be
// double-quoted; embedded quotes are doubled. No multi-line fields.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tsxfer::csv {

std::vector<std::string> split_line(std::string_view line);

/// Splits text into lines, dropping a trailing '\r' and skipping blank lines
/// and lines starting with '#'.
std::vector<std::string_view> lines(std::string_view text);

std::string quote_if_needed(std::string_view field);

/// Strict double parse of a whole field; accepts "nan"/"inf" spellings so the
/// caller can reject them with a proper error.
bool parse_double(std::string_view text, double& out);
bool parse_size(std::string_view text, std::size_t& out);

/// Shortest round-trip representation; deterministic across runs.
std::string format_double(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace tsxfer::csv
