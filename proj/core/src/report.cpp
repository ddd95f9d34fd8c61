#include "bicorpus/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bicorpus/error.hpp"
#include "bicorpus/unicode.hpp"

namespace bicorpus {

void KeyValueReport::set(std::string key, std::string value) {
  auto it = index_.find(key);
  if (it != index_.end()) {
    entries_[it->second].second = std::move(value);
    return;
  }
  index_.emplace(key, entries_.size());
  entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueReport::set(std::string key, long long value) {
  set(std::move(key), std::to_string(value));
}

void KeyValueReport::set(std::string key, unsigned long long value) {
  set(std::move(key), std::to_string(value));
}

void KeyValueReport::set(std::string key, double value) {
  set(std::move(key), format_fraction(value));
}

std::optional<std::string> KeyValueReport::get(std::string_view key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].second;
}

std::string KeyValueReport::to_string() const {
  std::string out;
  for (const auto& [key, value] : entries_) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

void KeyValueReport::write(const std::filesystem::path& path) const {
  write_file_atomic(path, to_string());
}

KeyValueReport KeyValueReport::parse(std::string_view text) {
  KeyValueReport report;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kCorrupt, "report line without '=': " + std::string(line));
    }
    report.set(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
  }
  return report;
}

KeyValueReport KeyValueReport::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open report " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string format_fraction(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

std::string TextTable::to_string() const {
  std::vector<std::size_t> widths(header_.size(), 0);
  auto measure = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i) {
      widths[i] = std::max(widths[i], unicode::codepoint_count(row[i]));
    }
  };
  measure(header_);
  for (const auto& row : rows_) measure(row);

  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < widths.size(); ++i) {
      const std::string cell = i < row.size() ? row[i] : "";
      const std::size_t pad = widths[i] - unicode::codepoint_count(cell);
      if (i > 0) out += "  ";
      if (i == 0) {
        out += cell;
        if (widths.size() > 1) out.append(pad, ' ');
      } else {
        out.append(pad, ' ');
        out += cell;
      }
    }
    out += '\n';
  };
  emit(header_);
  std::size_t total = 0;
  for (std::size_t w : widths) total += w;
  out.append(total + 2 * (widths.empty() ? 0 : widths.size() - 1), '-');
  out += '\n';
  for (const auto& row : rows_) emit(row);
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path partial = path;
  partial += ".partial";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + partial.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + partial.string());
  }
  std::filesystem::rename(partial, path);
}

}  // namespace bicorpus
