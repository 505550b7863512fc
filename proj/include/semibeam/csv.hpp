// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEMIBEAM_CSV_HPP
#define SEMIBEAM_CSV_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace semibeam
{

// One cell of a table. Doubles are written with 17 significant digits, which round-trips
// every finite IEEE double exactly.
using CsvCell = std::variant<double, long long, std::string>;

struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;

  // Throws std::invalid_argument when a row's width differs from the header's.
  std::string Render() const;
};

std::string FormatDouble(double value);
// Inverse of FormatDouble; accepts nan and inf. Throws std::invalid_argument on junk.
double ParseDouble(std::string_view text);

struct ParsedCsv
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t Column(std::string_view name) const;
  std::vector<double> Numbers(std::string_view name) const;
};

ParsedCsv ParseCsv(std::string_view text);
ParsedCsv ReadCsv(const std::filesystem::path &path);

// Writes contents to a sibling temporary file and renames it over path, so readers never
// see a partial file. Creates missing parent directories. Errors name the path.
void WriteFileAtomic(const std::filesystem::path &path, std::string_view contents);

void EmitCsv(const CsvTable &table, const std::filesystem::path &path);

// Lowercase hex SHA-256 digest.
std::string Sha256Hex(std::string_view data);

}  // namespace semibeam

#endif  // SEMIBEAM_CSV_HPP
