// Copyright 2026 The lichenwatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef LICHEN_CSV_HPP_
#define LICHEN_CSV_HPP_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lichen/error.hpp"

namespace lichen {

/// Splits one CSV line; supports double-quoted fields with "" escapes.
inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') { cur += '"'; ++i; }
        else quoted = false;
      } else cur += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) { if (c == '"') out += "\"\""; out += c; }
  out += '"';
  return out;
}

inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw error(errc::io, "cannot open: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    rows.push_back(csv_split(line));
  }
  return rows;
}

inline void write_csv(const std::string& path, const std::vector<std::vector<std::string>>& rows) {
  std::ofstream f(path);
  if (!f) throw error(errc::io, "cannot open for writing: " + path);
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) f << ',';
      f << csv_quote(row[i]);
    }
    f << '\n';
  }
}

}  // namespace lichen

#endif  // LICHEN_CSV_HPP_
