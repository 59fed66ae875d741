#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace monoperiod::cli {

enum class Format { csv, json, both };

struct OutputOptions {
  std::filesystem::path dir = ".";
  Format format = Format::both;

  bool csv() const { return format != Format::json; }
  bool json() const { return format != Format::csv; }
};

/// Column names in the header line, one row of numbers per line.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string str() const;
};

/// Creates the output directory on first use.
void write_text(const OutputOptions& out, const std::string& name, const std::string& text);
/// No-op unless CSV output is enabled.
void write_csv(const OutputOptions& out, const std::string& name, const CsvTable& table);
/// No-op unless JSON output is enabled.
void write_json(const OutputOptions& out, const std::string& name,
                const nlohmann::ordered_json& doc);

}  // namespace monoperiod::cli
