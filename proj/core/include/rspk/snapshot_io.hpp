// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>

#include "rspk/datagen.hpp"
#include "rspk/types.hpp"

namespace rspk {

/// RSPK1 container: magic "RSPK", u32 version = 1, u64 rows, u64 cols, then
/// rows * cols complex entries column-major as little-endian f64 (re, im).
inline constexpr std::uint32_t kRspkVersion = 1;
inline constexpr std::size_t kRspkHeaderBytes = 4 + 4 + 8 + 8;

void write_rspk(std::ostream& out, const CMatrix& matrix);
CMatrix read_rspk(std::istream& in);

/// CSV: header `re_0,im_0,...,re_{N-1},im_{N-1}`, then one line per column
/// of the matrix (one snapshot y_i per line).
void write_snapshot_csv(std::ostream& out, const CMatrix& matrix);
CMatrix read_snapshot_csv(std::istream& in);

void save_snapshots(const std::filesystem::path& path, const SnapshotMatrix& snapshots);
/// Detects RSPK1 by its magic bytes and falls back to CSV otherwise.
SnapshotMatrix load_snapshots(const std::filesystem::path& path);

}  // namespace rspk
