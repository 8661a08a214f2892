// csv.hpp -- minimal comma-separated IO shared by the table formats
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace vulnet::csv {

// Field split without quoting; none of the formats carry commas in values.
std::vector<std::string> split(const std::string& line);

// Reals are rendered with 6 fractional digits everywhere.
std::string format_real(double v);

long parse_long(const std::string& text, const std::string& context);
double parse_real(const std::string& text, const std::string& context);

// Whole-file helpers; both throw IoError on filesystem failure.
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace vulnet::csv
