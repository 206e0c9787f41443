// SPDX-License-Identifier: Apache-2.0
#include "rspk/snapshot_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rspk/errors.hpp"

namespace rspk {

namespace {

constexpr std::array<char, 4> kMagic = {'R', 'S', 'P', 'K'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(const unsigned char* p) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

std::vector<unsigned char> slurp(std::istream& in) {
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

void write_rspk(std::ostream& out, const CMatrix& matrix) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kRspkVersion);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(matrix.rows()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(matrix.cols()));
  for (Index j = 0; j < matrix.cols(); ++j) {
    for (Index i = 0; i < matrix.rows(); ++i) {
      put_le<double>(out, matrix(i, j).real());
      put_le<double>(out, matrix(i, j).imag());
    }
  }
  if (!out) throw Error("write_rspk: stream write failed");
}

CMatrix read_rspk(std::istream& in) {
  const auto bytes = slurp(in);
  if (bytes.size() < kRspkHeaderBytes) {
    throw FormatError("RSPK1 header truncated: expected " + std::to_string(kRspkHeaderBytes) +
                          " header bytes, got " + std::to_string(bytes.size()),
                      bytes.size());
  }
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw FormatError("bad RSPK1 magic", 0);
  }
  const auto version = get_le<std::uint32_t>(bytes.data() + 4);
  if (version != kRspkVersion) {
    throw FormatError("unsupported RSPK version " + std::to_string(version), 4);
  }
  const auto rows = get_le<std::uint64_t>(bytes.data() + 8);
  const auto cols = get_le<std::uint64_t>(bytes.data() + 16);
  if (rows == 0 || cols == 0) throw FormatError("RSPK1 dimensions must be positive", 8);
  constexpr std::uint64_t kEntryBytes = 16;
  const std::uint64_t max_entries = (std::numeric_limits<std::uint64_t>::max() - kRspkHeaderBytes) / kEntryBytes;
  if (rows > max_entries / cols) throw FormatError("RSPK1 dimensions overflow", 8);
  const std::uint64_t expected = kRspkHeaderBytes + rows * cols * kEntryBytes;
  if (bytes.size() != expected) {
    throw FormatError("RSPK1 payload size mismatch for " + std::to_string(rows) + " x " + std::to_string(cols) +
                          ": expected " + std::to_string(expected) + " bytes, got " + std::to_string(bytes.size()),
                      std::min<std::uint64_t>(bytes.size(), expected));
  }
  CMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  const unsigned char* p = bytes.data() + kRspkHeaderBytes;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      const double re = get_le<double>(p);
      const double im = get_le<double>(p + 8);
      m(i, j) = {re, im};
      p += kEntryBytes;
    }
  }
  return m;
}

void write_snapshot_csv(std::ostream& out, const CMatrix& matrix) {
  for (Index i = 0; i < matrix.rows(); ++i) {
    out << (i ? "," : "") << "re_" << i << ",im_" << i;
  }
  out << '\n';
  char buf[64];
  for (Index j = 0; j < matrix.cols(); ++j) {
    for (Index i = 0; i < matrix.rows(); ++i) {
      if (i) out << ',';
      auto r = std::to_chars(buf, buf + sizeof(buf), matrix(i, j).real());
      out.write(buf, r.ptr - buf);
      out << ',';
      r = std::to_chars(buf, buf + sizeof(buf), matrix(i, j).imag());
      out.write(buf, r.ptr - buf);
    }
    out << '\n';
  }
}

CMatrix read_snapshot_csv(std::istream& in) {
  std::string line;
  std::uint64_t offset = 0;
  if (!std::getline(in, line)) throw FormatError("empty snapshot CSV", 0);
  std::size_t header_fields = 1;
  for (char ch : line) header_fields += (ch == ',');
  if (header_fields % 2 != 0 || line.rfind("re_0", 0) != 0) {
    throw FormatError("snapshot CSV header must read re_0,im_0,...", 0);
  }
  const auto rows = static_cast<Index>(header_fields / 2);
  offset += line.size() + 1;

  std::vector<double> values;
  Index cols = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      offset += line.size() + 1;
      continue;
    }
    std::size_t fields = 0;
    const char* begin = line.data();
    const char* end = line.data() + line.size();
    while (begin <= end) {
      const char* comma = std::find(begin, end, ',');
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(begin, comma, x);
      if (ec != std::errc() || ptr != comma) {
        throw FormatError("malformed number in snapshot CSV", offset + static_cast<std::uint64_t>(begin - line.data()));
      }
      values.push_back(x);
      ++fields;
      begin = comma + 1;
    }
    if (fields != static_cast<std::size_t>(2 * rows)) {
      throw FormatError("snapshot CSV row has " + std::to_string(fields) + " fields, expected " +
                            std::to_string(2 * rows),
                        offset);
    }
    ++cols;
    offset += line.size() + 1;
  }
  if (cols == 0) throw FormatError("snapshot CSV has no data rows", offset);
  CMatrix m(rows, cols);
  std::size_t k = 0;
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i, k += 2) m(i, j) = {values[k], values[k + 1]};
  }
  return m;
}

void save_snapshots(const std::filesystem::path& path, const SnapshotMatrix& snapshots) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  if (path.extension() == ".csv") {
    write_snapshot_csv(out, snapshots.data());
  } else {
    write_rspk(out, snapshots.data());
  }
}

SnapshotMatrix load_snapshots(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  const auto got = in.gcount();
  in.clear();
  in.seekg(0);
  if (got == 4 && head == kMagic) return SnapshotMatrix(read_rspk(in));
  return SnapshotMatrix(read_snapshot_csv(in));
}

}  // namespace rspk
