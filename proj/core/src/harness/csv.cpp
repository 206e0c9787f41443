// SPDX-License-Identifier: Apache-2.0
#include "rspk/harness/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "rspk/errors.hpp"

namespace rspk::harness {

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string provenance_line(std::uint64_t config_hash, std::uint64_t seed) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "# config_hash=%016llx seed=%llu", static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::uint64_t config_hash, std::uint64_t seed,
                     const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw ConfigError("cannot write '" + path.string() + "'");
  out_ << provenance_line(config_hash, seed) << '\n';
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw Error("csv '" + path_.string() + "': row has " + std::to_string(cells.size()) + " cells, expected " +
                std::to_string(columns_));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
  if (!out_) throw Error("csv '" + path_.string() + "': write failed");
}

}  // namespace rspk::harness
