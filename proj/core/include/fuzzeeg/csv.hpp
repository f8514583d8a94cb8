#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fuzzeeg {

/// Shortest round-trippable text for a double ("%.17g" trimmed), so that
/// repeated runs produce byte-identical files.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Plain comma-separated reader: first line is the header, no quoting.
CsvTable read_csv(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, const CsvTable& table);

}  // namespace fuzzeeg
