#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace qikdv {

/// Flat `section.key = value` document. Blank lines and `#` comments are ignored.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated numbers.
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  /// Keys never read by any getter; lets callers reject typos.
  std::vector<std::string> unused() const;

  const std::map<std::string, std::string>& values() const { return values_; }
  /// Sorted `key = value` lines.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;

 private:
  const std::string* find(const std::string& key) const;
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

std::uint64_t fnv1a64(const std::string& s);

}  // namespace qikdv
