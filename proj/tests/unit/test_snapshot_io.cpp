// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "rspk/errors.hpp"
#include "rspk/rng.hpp"
#include "rspk/snapshot_io.hpp"

namespace rspk {
namespace {

CMatrix random_matrix(Index r, Index c, std::uint64_t seed) {
  Rng rng(seed);
  CMatrix m(r, c);
  for (Index j = 0; j < c; ++j) {
    for (Index i = 0; i < r; ++i) m(i, j) = complex_normal(rng);
  }
  return m;
}

TEST(SnapshotIo, RspkRoundTripIsExact) {
  const CMatrix m = random_matrix(5, 7, 1);
  std::stringstream ss;
  write_rspk(ss, m);
  EXPECT_EQ(ss.str().size(), kRspkHeaderBytes + 5 * 7 * 16);
  EXPECT_EQ(ss.str().substr(0, 4), "RSPK");
  const CMatrix back = read_rspk(ss);
  EXPECT_TRUE(back == m);
}

TEST(SnapshotIo, TruncatedFileNamesExpectedLength) {
  const CMatrix m = random_matrix(3, 4, 2);
  std::stringstream ss;
  write_rspk(ss, m);
  std::string bytes = ss.str();
  bytes.resize(bytes.size() - 10);
  std::stringstream cut(bytes);
  try {
    read_rspk(cut);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    const std::string expected = std::to_string(kRspkHeaderBytes + 3 * 4 * 16);
    EXPECT_NE(std::string(e.what()).find(expected), std::string::npos) << e.what();
  }
}

TEST(SnapshotIo, BadMagic) {
  std::stringstream ss("XSPK0000000000000000000000000000");
  EXPECT_THROW(read_rspk(ss), FormatError);
}

TEST(SnapshotIo, CsvRoundTrip) {
  const CMatrix m = random_matrix(3, 6, 3);
  std::stringstream ss;
  write_snapshot_csv(ss, m);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "re_0,im_0,re_1,im_1,re_2,im_2");
  ss.seekg(0);
  const CMatrix back = read_snapshot_csv(ss);
  EXPECT_TRUE(back == m);
}

TEST(SnapshotIo, CsvReportsOffset) {
  std::stringstream ss("re_0,im_0\n1.0,2.0\n1.0,abc\n");
  try {
    read_snapshot_csv(ss);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_GT(e.offset(), 0u);
  }
}

TEST(SnapshotIo, FilesDetectFormat) {
  const auto dir = std::filesystem::temp_directory_path() / "rspk_io_test";
  std::filesystem::create_directories(dir);
  const SnapshotMatrix y(random_matrix(4, 9, 4));
  save_snapshots(dir / "a.rspk", y);
  save_snapshots(dir / "a.csv", y);
  EXPECT_TRUE(load_snapshots(dir / "a.rspk").data() == y.data());
  EXPECT_TRUE(load_snapshots(dir / "a.csv").data() == y.data());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace rspk
