#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace madd {

// Comma-separated table with a header row. Fields may be double-quoted
// (RFC 4180 style, "" for a literal quote); CRLF line endings are accepted.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of `name` in the header, or -1.
  int column(std::string_view name) const;
};

// Throws ParseError on an unterminated quote or a row whose field count
// differs from the header.
CsvTable parse_csv(std::string_view text);

// Throws IoError if the file cannot be read.
CsvTable read_csv(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

// Truncates and writes, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace madd
