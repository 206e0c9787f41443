// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace rspk::harness {

/// Shortest round-trip decimal form of x.
std::string csv_number(double x);

/// `# config_hash=<16 hex> seed=<u64>` line.
std::string provenance_line(std::uint64_t config_hash, std::uint64_t seed);

/// CSV file with the provenance comment and a header row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::uint64_t config_hash, std::uint64_t seed,
            const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace rspk::harness
