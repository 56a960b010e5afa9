#pragma once

#include <string>
#include <vector>

namespace shapelab {

// full precision: round-trips every double exactly
std::string format_float(double v);

// RFC-4180 quoting when a field contains a comma, quote, or newline
std::string csv_escape(const std::string& field);

struct ResultTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string version;
  std::string config_echo;  // canonical command line, re-parseable
  double wall_time_s = 0.0;

  void add_row(const std::vector<std::string>& row);
  // comment lines (# version / # config / # wall_time_s), header, rows;
  // UTF-8, LF
  std::string to_csv() const;
};

void write_text_file(const std::string& path, const std::string& content);

// extracts the "# config: ..." echo from CSV text; empty if absent
std::string parse_config_echo(const std::string& csv_text);

}  // namespace shapelab
