#include "output.hpp"

#include <charconv>
#include <cmath>

#include <nlohmann/json.hpp>

namespace dgprobe::cli {

std::string format_number(double x) {
  if (x == 0.0) return "0";
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Header& header, const Table& table) {
  out << "# dgprobe " << header.version << " " << header.command << "\n";
  out << "# config_hash: " << header.hash << "\n";
  out << "# model: " << header.model << "\n";
  for (const auto& [key, value] : table.meta) out << "# " << key << ": " << value << "\n";
  out << "# units:";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? ", " : " ") << table.columns[i].name << " [" << table.columns[i].unit << "]";
  out << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i].name;
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << "\n";
  }
}

void write_json(std::ostream& out, const Header& header, const Table& table) {
  // Numbers are emitted through format_number so the mirror matches the CSV digit for digit.
  auto json_string = [](const std::string& s) { return nlohmann::json(s).dump(); };
  out << "{\n  \"generator\": " << json_string("dgprobe " + header.version) << ",\n";
  out << "  \"command\": " << json_string(header.command) << ",\n";
  out << "  \"model\": " << json_string(header.model) << ",\n";
  out << "  \"config_hash\": " << json_string(header.hash) << ",\n";
  out << "  \"meta\": {";
  for (std::size_t i = 0; i < table.meta.size(); ++i)
    out << (i ? ", " : "") << json_string(table.meta[i].first) << ": " << json_string(table.meta[i].second);
  out << "},\n  \"columns\": [";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? ", " : "") << "{\"name\": " << json_string(table.columns[i].name)
        << ", \"unit\": " << json_string(table.columns[i].unit) << "}";
  out << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << (r ? ",\n    [" : "\n    [");
    for (std::size_t i = 0; i < table.rows[r].size(); ++i) {
      const double x = table.rows[r][i];
      out << (i ? ", " : "") << (std::isfinite(x) ? format_number(x) : json_string(format_number(x)));
    }
    out << "]";
  }
  out << (table.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

}  // namespace dgprobe::cli
