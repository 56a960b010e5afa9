#include "shapelab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "shapelab/error.hpp"

namespace shapelab {

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void ResultTable::add_row(const std::vector<std::string>& row) {
  if (row.size() != header.size())
    throw ValidationError("row width does not match the table header");
  rows.push_back(row);
}

std::string ResultTable::to_csv() const {
  std::ostringstream os;
  os << "# version: " << version << "\n";
  os << "# config: " << config_echo << "\n";
  os << "# wall_time_s: " << format_float(wall_time_s) << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open for writing: " + path);
  f << content;
  if (!f) throw ValidationError("write failed: " + path);
}

std::string parse_config_echo(const std::string& csv_text) {
  std::istringstream is(csv_text);
  std::string line;
  const std::string tag = "# config: ";
  while (std::getline(is, line)) {
    if (line.rfind(tag, 0) == 0) return line.substr(tag.size());
    if (!line.empty() && line[0] != '#') break;  // comments come first
  }
  return "";
}

}  // namespace shapelab
