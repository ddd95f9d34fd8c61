#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bicorpus {

// Machine-readable report: ordered "key=value" lines. Keys are dotted paths
// such as "source.wiki.sentences_in".
class KeyValueReport {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, const char* value) { set(std::move(key), std::string(value)); }
  void set(std::string key, long long value);
  void set(std::string key, unsigned long long value);
  void set(std::string key, int value) { set(std::move(key), static_cast<long long>(value)); }
  void set(std::string key, unsigned value) { set(std::move(key), static_cast<unsigned long long>(value)); }
  void set(std::string key, long value) { set(std::move(key), static_cast<long long>(value)); }
  void set(std::string key, unsigned long value) { set(std::move(key), static_cast<unsigned long long>(value)); }
  void set(std::string key, double value);
  void set(std::string key, bool value) { set(std::move(key), std::string(value ? "true" : "false")); }

  std::optional<std::string> get(std::string_view key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string to_string() const;
  void write(const std::filesystem::path& path) const;
  static KeyValueReport read(const std::filesystem::path& path);
  static KeyValueReport parse(std::string_view text);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Fixed-precision decimal formatting used in every report.
std::string format_fraction(double value, int precision = 6);

// Left-aligned first column, right-aligned remaining columns.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::string to_string() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Writes via a ".partial" sibling and renames on success.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace bicorpus
