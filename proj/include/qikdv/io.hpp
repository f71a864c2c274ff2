#pragma once

#include <string>
#include <vector>

namespace qikdv {

inline constexpr const char* kVersion = "qikdv 0.1.0";

/// Shortest decimal that reads back to the same double; nan/inf spelled out.
std::string format_double(double v);

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);
void write_text(const std::string& path, const std::string& text);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
/// Creates the directory (and parents) if missing.
void ensure_dir(const std::string& dir);
std::string join_path(const std::string& dir, const std::string& file);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace qikdv
