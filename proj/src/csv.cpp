// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "semibeam/csv.hpp"

#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <unistd.h>
#include <openssl/evp.h>

namespace semibeam
{

std::string FormatDouble(double value)
{
  if (std::isnan(value))
  {
    return "nan";
  }
  if (std::isinf(value))
  {
    return value > 0 ? "inf" : "-inf";
  }
  std::array<char, 40> buffer;
  const int n = std::snprintf(buffer.data(), buffer.size(), "%.17g", value);
  return std::string(buffer.data(), static_cast<std::size_t>(n));
}

double ParseDouble(std::string_view text)
{
  double value = 0.0;
  const char *end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
  {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string CsvTable::Render() const
{
  std::string out;
  for (std::size_t i = 0; i < header.size(); i++)
  {
    out += (i ? "," : "") + header[i];
  }
  out += '\n';
  for (const auto &row : rows)
  {
    if (row.size() != header.size())
    {
      throw std::invalid_argument("CSV row has " + std::to_string(row.size()) +
                                  " cells, header has " + std::to_string(header.size()));
    }
    for (std::size_t i = 0; i < row.size(); i++)
    {
      if (i)
      {
        out += ',';
      }
      if (const double *d = std::get_if<double>(&row[i]))
      {
        out += FormatDouble(*d);
      }
      else if (const long long *k = std::get_if<long long>(&row[i]))
      {
        out += std::to_string(*k);
      }
      else
      {
        const std::string &s = std::get<std::string>(row[i]);
        if (s.find_first_of(",\"\n") != std::string::npos)
        {
          throw std::invalid_argument("CSV text cell contains a separator: '" + s + "'");
        }
        out += s;
      }
    }
    out += '\n';
  }
  return out;
}

std::size_t ParsedCsv::Column(std::string_view name) const
{
  for (std::size_t i = 0; i < header.size(); i++)
  {
    if (header[i] == name)
    {
      return i;
    }
  }
  throw std::out_of_range("no CSV column '" + std::string(name) + "'");
}

std::vector<double> ParsedCsv::Numbers(std::string_view name) const
{
  const std::size_t c = Column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto &row : rows)
  {
    out.push_back(ParseDouble(row.at(c)));
  }
  return out;
}

ParsedCsv ParseCsv(std::string_view text)
{
  auto split = [](std::string_view line)
  {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true)
    {
      const std::size_t comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos)
      {
        return cells;
      }
      start = comma + 1;
    }
  };

  ParsedCsv out;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size())
  {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos)
    {
      eol = text.size();
    }
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (first)
    {
      out.header = split(line);
      first = false;
      continue;
    }
    auto cells = split(line);
    if (cells.size() != out.header.size())
    {
      throw std::invalid_argument("CSV row width " + std::to_string(cells.size()) +
                                  " does not match header width " +
                                  std::to_string(out.header.size()));
    }
    out.rows.push_back(std::move(cells));
  }
  if (first)
  {
    throw std::invalid_argument("CSV text has no header row");
  }
  return out;
}

ParsedCsv ReadCsv(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return ParseCsv(text.str());
}

void WriteFileAtomic(const std::filesystem::path &path, std::string_view contents)
{
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path())
  {
    fs::create_directories(path.parent_path(), ec);
    if (ec)
    {
      throw std::runtime_error("cannot create directory '" + path.parent_path().string() +
                               "': " + ec.message());
    }
  }
  fs::path temp = path;
  temp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out)
    {
      fs::remove(temp, ec);
      throw std::runtime_error("cannot write '" + path.string() + "'");
    }
  }
  fs::rename(temp, path, ec);
  if (ec)
  {
    std::error_code ignored;
    fs::remove(temp, ignored);
    throw std::runtime_error("cannot move output into place at '" + path.string() +
                             "': " + ec.message());
  }
}

void EmitCsv(const CsvTable &table, const std::filesystem::path &path)
{
  WriteFileAtomic(path, table.Render());
}

std::string Sha256Hex(std::string_view data)
{
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1)
  {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; i++)
  {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

}  // namespace semibeam
