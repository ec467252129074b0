// Copyright 2026 The riskcdf Authors.
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

// Minimal CSV reading and number formatting shared by the loaders.

#ifndef RISKCDF_CSV_HPP_
#define RISKCDF_CSV_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace riskcdf {

struct CsvTable {
  std::vector<std::string> header;  // empty when read without a header
  std::vector<std::vector<std::string>> rows;
};

/// Reads a comma-separated file. Blank lines are skipped; fields are trimmed
/// of surrounding whitespace. Throws FormatError if the file cannot be opened.
CsvTable ReadCsv(const std::filesystem::path& path, bool has_header);

/// Parses one numeric cell. `row` and `column` are 1-based positions used in
/// the FormatError message.
double ParseCell(std::string_view cell, std::size_t row, std::size_t column);

/// Shortest decimal that round-trips to the same double (at most 17
/// significant digits).
std::string FormatDouble(double value);

/// Writes `contents` to `path`, replacing any existing file.
void WriteTextFile(const std::filesystem::path& path, std::string_view contents);

std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace riskcdf

#endif  // RISKCDF_CSV_HPP_
