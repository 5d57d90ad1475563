#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hg::io {

/// Numeric CSV table: lines starting with '#' are comments, the first
/// non-comment line is a header unless it parses as numbers.
struct CsvTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::vector<std::string> comments;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  const std::vector<double>& column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Formats with 12 significant digits, the precision used by every CLI output.
std::string format_number(double v);

/// key=value lines; '#' starts a comment, blank lines are skipped.
std::map<std::string, std::string> parse_key_values(std::istream& in);
std::map<std::string, std::string> parse_key_values(const std::filesystem::path& path);

}  // namespace hg::io
