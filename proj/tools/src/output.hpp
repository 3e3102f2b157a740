#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace dgprobe::cli {

struct Column {
  std::string name;
  std::string unit;
};

/// One output file: numeric rows plus `#` metadata lines.
struct Table {
  std::string suffix;  // appended to the output stem; empty for the main table
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> meta;
};

/// Shortest round-trip decimal form.
std::string format_number(double x);

struct Header {
  std::string version;
  std::string command;
  std::string model;
  std::string hash;
};

void write_csv(std::ostream& out, const Header& header, const Table& table);
void write_json(std::ostream& out, const Header& header, const Table& table);

}  // namespace dgprobe::cli
