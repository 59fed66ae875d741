#include "monoperiod/cli/output.hpp"

#include <fstream>

#include "monoperiod/cli/config.hpp"

namespace monoperiod::cli {

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + header[j];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + format_number(row[j]);
    out += '\n';
  }
  return out;
}

void write_text(const OutputOptions& out, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(out.dir);
  const auto path = out.dir / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
}

void write_csv(const OutputOptions& out, const std::string& name, const CsvTable& table) {
  if (out.csv()) write_text(out, name, table.str());
}

void write_json(const OutputOptions& out, const std::string& name,
                const nlohmann::ordered_json& doc) {
  if (out.json()) write_text(out, name, doc.dump(2) + "\n");
}

}  // namespace monoperiod::cli
