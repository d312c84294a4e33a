// Copyright 2026 The mmdbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mmdbayes/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace mmdbayes {

CsvError::CsvError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "NA";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& cell) {
  std::size_t b = 0;
  std::size_t e = cell.size();
  while (b < e && std::isspace(static_cast<unsigned char>(cell[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(cell[e - 1]))) --e;
  if (e - b == 2 && cell.compare(b, 2, "NA") == 0) return std::nan("");
  if (b < e && cell[b] == '+') ++b;
  double value = 0.0;
  const auto res = std::from_chars(cell.data() + b, cell.data() + e, value);
  if (b == e || res.ec != std::errc() || res.ptr != cell.data() + e)
    throw std::invalid_argument("not a number: '" + cell + "'");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  return cells;
}

Samples read_samples_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto cells = split_csv_line(line);
    if (rows == 0) cols = cells.size();
    if (cells.size() != cols) {
      throw CsvError(line_no, "expected " + std::to_string(cols) + " columns, found " +
                                  std::to_string(cells.size()));
    }
    for (const auto& cell : cells) {
      double v;
      try {
        v = parse_double(cell);
      } catch (const std::invalid_argument&) {
        throw CsvError(line_no, "not a number: '" + cell + "'");
      }
      if (!std::isfinite(v)) throw CsvError(line_no, "non-finite value");
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw CsvError(line_no == 0 ? 1 : line_no, "no observations");
  Samples out(static_cast<Index>(rows), static_cast<Index>(cols));
  std::copy(values.begin(), values.end(), out.data());
  return out;
}

Samples read_samples_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(0, "cannot open " + path);
  return read_samples_csv(in);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::out_of_range("no column named " + name);
}

CsvTable read_table(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw CsvError(line_no, "expected " + std::to_string(table.header.size()) +
                                  " columns, found " + std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw CsvError(1, "missing header");
  return table;
}

}  // namespace mmdbayes
