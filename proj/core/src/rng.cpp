// SPDX-License-Identifier: Apache-2.0
#include "rspk/rng.hpp"

#include <cmath>

namespace rspk {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial, StreamRole role) noexcept {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ trial);
  h = splitmix64(h ^ static_cast<std::uint64_t>(role));
  return h;
}

cplx complex_normal(Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

}  // namespace rspk
