#include "qikdv/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qikdv/errors.hpp"

namespace qikdv {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
  s += "\n";
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw ValidationError("csv", "row width does not match header");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) s += ",";
      s += format_double(r[i]);
    }
    s += "\n";
  }
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError(path, "cannot open for writing");
  f << text;
  f.close();
  if (!f) throw IoError(path, "write failed");
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  write_text(path, csv_text(header, rows));
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError(dir, "cannot create output directory");
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ValidationError("csv", "no column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError(path, "cannot open");
  CsvTable t;
  std::string line;
  if (!std::getline(f, line)) throw IoError(path, "empty file");
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) t.header.push_back(c);
  }
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string c;
    std::vector<double> row;
    while (std::getline(ss, c, ',')) row.push_back(c == "nan" ? NAN : std::stod(c));
    t.rows.push_back(row);
  }
  return t;
}

}  // namespace qikdv
