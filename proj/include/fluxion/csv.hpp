#pragma once

// CSV emission for the batch front end. Numbers are printed in their
// shortest round-trip form so identical runs produce byte-identical files
// and downstream tools can diff them exactly.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fluxion {

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_number(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

inline std::string format_number(long long value) {
  char buffer[24];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

/// One output file: mandatory header, data rows, and trailing metadata
/// lines that are written with a `# ` prefix.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> trailing;
};

inline std::string render_csv(const CsvTable& table) {
  std::string out;
  const auto append_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append_row(table.header);
  for (const auto& row : table.rows) append_row(row);
  for (const auto& line : table.trailing) {
    out += "# ";
    out += line;
    out += '\n';
  }
  return out;
}

/// Writes the table through a sibling temp file and renames it into place,
/// so a reader never observes a partially written file. Line endings are LF
/// on every platform.
inline void write_csv(const std::filesystem::path& path,
                      const CsvTable& table) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  const fs::path temp = path.string() + ".tmp";
  {
    std::ofstream stream(temp, std::ios::binary | std::ios::trunc);
    if (!stream) {
      throw std::runtime_error("write_csv: cannot open " + temp.string());
    }
    stream << render_csv(table);
    stream.flush();
    if (!stream) {
      throw std::runtime_error("write_csv: write failed for " +
                               temp.string());
    }
  }
  fs::rename(temp, path);
}

}  // namespace fluxion
