#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace biasrank {

// A parsed delimited file. The delimiter is sniffed from the header row:
// tab when present there, comma otherwise.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  char delimiter = ',';

  // Index of a required column; throws ParseError if absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

// RFC-4180-style quoting (no embedded newlines). Writes LF line endings so
// output files are byte-stable across platforms.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               char delimiter = ',');

std::string csv_escape(const std::string& field, char delimiter);

}  // namespace biasrank
