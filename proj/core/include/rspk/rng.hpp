// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

#include "rspk/types.hpp"

namespace rspk {

using Rng = std::mt19937_64;

/// Independent stream roles inside one Monte Carlo trial.
enum class StreamRole : std::uint64_t {
  kData = 1,
  kQuadrature = 2,
  kEquivalentModel = 3,
  kAuxiliary = 4,
};

/// Mixes (seed, trial, role) into a 64-bit engine seed with splitmix64, so
/// every trial owns a stream that depends only on its index.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial, StreamRole role) noexcept;

inline Rng make_stream(std::uint64_t master_seed, std::uint64_t trial, StreamRole role) {
  return Rng(derive_seed(master_seed, trial, role));
}

/// Circularly symmetric complex normal with unit variance.
cplx complex_normal(Rng& rng);

}  // namespace rspk
