#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace numsig {

// Splits on a separator without collapsing empty fields.
std::vector<std::string> split(const std::string& line, char sep);

std::string trim(const std::string& s);

double parse_double(const std::string& field, const std::string& context);
int parse_int(const std::string& field, const std::string& context);

// printf-style %.* g formatting; all CSV/SVG output goes through this so
// reruns are byte-identical.
std::string fmt_g(double value, int precision = 12);

// Data lines of a text file: comment ('#') and blank lines dropped.
std::vector<std::string> read_data_lines(const std::filesystem::path& path);

std::ofstream open_output(const std::filesystem::path& path);
std::ifstream open_input(const std::filesystem::path& path);

}  // namespace numsig
