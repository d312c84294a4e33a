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

#pragma once

#include "mmdbayes/types.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmdbayes {

/// Parse failure carrying the 1-based line number of the offending input line.
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Shortest text that reads back to the same double; NaN and infinities as NA.
std::string format_double(double x);

/// Parses a cell written by format_double (NA -> NaN). Throws std::invalid_argument.
double parse_double(const std::string& cell);

/// Numeric sample file: one observation per row, one coordinate per column,
/// comma separated. Blank lines and lines starting with '#' are skipped, so an
/// optional '#'-prefixed header is allowed. Throws CsvError on ragged rows,
/// non-numeric cells, non-finite values or an empty file.
Samples read_samples_csv(std::istream& in);
Samples read_samples_csv_file(const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by header name; throws std::out_of_range if missing.
  std::size_t column(const std::string& name) const;
};

/// Generic comma separated table with a header line. Throws CsvError on
/// rows whose width differs from the header.
CsvTable read_table(std::istream& in);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace mmdbayes
