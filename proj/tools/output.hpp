#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hg::cli {

enum class Format { csv, json };

// One cell: a number (empty when absent or non-finite) or text.
using Cell = std::variant<std::optional<double>, std::string>;

struct Document {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;  // seed and inputs, in order
  std::vector<std::pair<std::string, std::string>> notes;       // derived facts about the rows
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void param(std::string key, std::string value) { parameters.emplace_back(std::move(key), std::move(value)); }
  void note(std::string key, std::string value) { notes.emplace_back(std::move(key), std::move(value)); }
};

/// CSV: '#'-prefixed tool/version, command, parameter and note lines, then a
/// header row. JSON: one object with the same content. Numbers carry 12
/// significant digits in both.
void write(std::ostream& out, const Document& doc, Format format);

}  // namespace hg::cli
