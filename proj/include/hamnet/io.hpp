#pragma once

#include <string>

namespace hamnet::io {

// Shortest decimal form that parses back to the identical double; keeps CSV
// and weight files byte-stable across runs.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace hamnet::io
