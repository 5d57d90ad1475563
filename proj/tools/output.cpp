#include "output.hpp"

#include <cmath>
#include <json.hpp>

#include "heavygini/io.hpp"

namespace hg::cli {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string csv_cell(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return csv_field(*s);
  const auto& v = std::get<std::optional<double>>(c);
  return v && std::isfinite(*v) ? io::format_number(*v) : std::string();
}

nlohmann::ordered_json json_cell(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  const auto& v = std::get<std::optional<double>>(c);
  if (!v || !std::isfinite(*v)) return nullptr;
  return std::stod(io::format_number(*v));
}

}  // namespace

void write(std::ostream& out, const Document& doc, Format format) {
  if (format == Format::csv) {
    out << "# heavygini " << HEAVYGINI_VERSION << "\n";
    out << "# command=" << doc.command << "\n";
    for (const auto& [k, v] : doc.parameters) out << "# " << k << "=" << v << "\n";
    for (const auto& [k, v] : doc.notes) out << "# " << k << "=" << v << "\n";
    for (std::size_t j = 0; j < doc.columns.size(); ++j) out << (j ? "," : "") << doc.columns[j];
    out << "\n";
    for (const auto& row : doc.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << csv_cell(row[j]);
      out << "\n";
    }
    return;
  }
  nlohmann::ordered_json j;
  j["tool"] = "heavygini";
  j["version"] = HEAVYGINI_VERSION;
  j["command"] = doc.command;
  auto& params = j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : doc.parameters) params[k] = v;
  auto& notes = j["notes"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : doc.notes) notes[k] = v;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : doc.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size() && c < doc.columns.size(); ++c) r[doc.columns[c]] = json_cell(row[c]);
    rows.push_back(std::move(r));
  }
  out << j.dump(2) << "\n";
}

}  // namespace hg::cli
