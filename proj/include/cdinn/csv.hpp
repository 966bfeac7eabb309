#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cdinn/matrix.hpp"

namespace cdinn {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) {
    require(row.size() == columns.size(), "Table: row width mismatch");
    rows.push_back(std::move(row));
  }
};

inline std::string fmt_g(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t j = 0; j < t.columns.size(); ++j)
    os << (j ? "," : "") << csv_escape(t.columns[j]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << csv_escape(row[j]);
    os << "\n";
  }
  return os.str();
}

// All file writes go through a temp-then-rename so readers never observe a
// half-written artifact.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + tmp.string());
    os << content;
  }
  std::filesystem::rename(tmp, path);
}

inline void write_csv(const std::filesystem::path& path, const Table& t) {
  write_file_atomic(path, to_csv(t));
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// Minimal RFC-4180 reader (quoted fields, doubled quotes).
inline Table read_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!field.empty() || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  require(!records.empty(), "read_csv: empty file " + path.string());
  Table t;
  t.name = path.stem().string();
  t.columns = records.front();
  for (std::size_t i = 1; i < records.size(); ++i) {
    require(records[i].size() == t.columns.size(), "read_csv: ragged row in " + path.string());
    t.rows.push_back(records[i]);
  }
  return t;
}

// Numeric dataset CSV: feature columns then one target column (or T target
// columns for sequence data, labeled y0..).
inline Table dataset_to_table(const Matrix& inputs, const Matrix& targets, bool sequences) {
  Table t;
  for (std::size_t j = 0; j < inputs.cols; ++j)
    t.columns.push_back((sequences ? "u" : "x") + std::to_string(j));
  for (std::size_t j = 0; j < targets.cols; ++j)
    t.columns.push_back(targets.cols == 1 ? std::string("y") : "y" + std::to_string(j));
  for (std::size_t i = 0; i < inputs.rows; ++i) {
    std::vector<std::string> row;
    for (std::size_t j = 0; j < inputs.cols; ++j) row.push_back(fmt_g(inputs(i, j)));
    for (std::size_t j = 0; j < targets.cols; ++j) row.push_back(fmt_g(targets(i, j)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace cdinn
