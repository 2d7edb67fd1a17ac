// Copyright 2026 The opca authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Counter-based pseudo-random numbers: Philox4x32-10 (Salmon et al.,
// "Parallel random numbers: as easy as 1, 2, 3", SC'11).  Every draw is a
// pure function of (key, counter), so any sample of any stream can be
// regenerated in O(1) regardless of thread scheduling or access order, and
// the produced bits are identical across platforms.

#ifndef OPCA_PRNG_HPP
#define OPCA_PRNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

#include "opca/types.hpp"

namespace opca {

// 64-bit finalizer used to derive independent keys from (seed, index) pairs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Purpose tags keeping the independent uses of one seed on disjoint keys.
namespace purpose {
constexpr std::uint64_t kData = 1;         // stream samples
constexpr std::uint64_t kInit = 2;         // initial iterate of a trial
constexpr std::uint64_t kModelBasis = 3;   // covariance spike basis
constexpr std::uint64_t kModelSpikes = 4;  // covariance spike strengths
constexpr std::uint64_t kOde = 5;          // ODE starting points
}  // namespace purpose

// Key for one logical stream.  `purpose` separates the independent uses of a
// trial's randomness (data samples, initial iterate, model construction).
inline std::uint64_t mix_key(std::uint64_t base_seed, std::uint64_t stream,
                             std::uint64_t purpose = 0) {
  std::uint64_t k = splitmix64(base_seed);
  k = splitmix64(k ^ splitmix64(stream + 0x2545F4914F6CDD1DULL));
  k = splitmix64(k ^ (purpose * 0xD6E8FEB86659FD93ULL));
  return k;
}

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         const std::array<std::uint32_t, 2>& key) {
  const std::uint64_t m0 = 0xD2511F53ULL * ctr[0];
  const std::uint64_t m1 = 0xCD9E8D57ULL * ctr[2];
  const auto hi0 = static_cast<std::uint32_t>(m0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(m0);
  const auto hi1 = static_cast<std::uint32_t>(m1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(m1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace detail

// One 10-round Philox4x32 block: 128 counter bits -> 128 output bits.
inline std::array<std::uint32_t, 4> philox4x32(
    std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    detail::philox_round(counter, key);
    key[0] += 0x9E3779B9u;  // golden ratio
    key[1] += 0xBB67AE85u;  // sqrt(3) - 1
  }
  return counter;
}

namespace detail {

// Map two 32-bit words to a double in the open interval (0, 1).  Keeping 52
// bits makes k + 0.5 exact for every k, so the result never rounds to 0 or 1.
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace detail

// Stream of N(0,1) draws addressed by (element index).  Box-Muller consumes
// one Philox block per pair of normals; both outputs of each transform are
// used, so normal #j depends only on the block floor(j / 2).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t key)
      : key_{static_cast<std::uint32_t>(key),
             static_cast<std::uint32_t>(key >> 32)} {}

  // j-th normal of sub-stream `ctr` (e.g. ctr = sample index).
  double at(std::uint64_t ctr, std::uint64_t j) const {
    const std::uint64_t pair = j >> 1;
    const auto w = philox4x32({static_cast<std::uint32_t>(pair),
                               static_cast<std::uint32_t>(pair >> 32),
                               static_cast<std::uint32_t>(ctr),
                               static_cast<std::uint32_t>(ctr >> 32)},
                              key_);
    const double u1 = detail::to_open_unit(w[0], w[1]);
    const double u2 = detail::to_open_unit(w[2], w[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return (j & 1) ? r * std::sin(2.0 * M_PI * u2)
                   : r * std::cos(2.0 * M_PI * u2);
  }

  // Fills `out` with the first `n` normals of sub-stream `ctr`, evaluating
  // each Box-Muller pair once.
  void fill(std::uint64_t ctr, Eigen::Ref<Vector> out) const {
    const Index n = out.size();
    for (Index j = 0; j < n; j += 2) {
      const std::uint64_t pair = static_cast<std::uint64_t>(j) >> 1;
      const auto w = philox4x32({static_cast<std::uint32_t>(pair),
                                 static_cast<std::uint32_t>(pair >> 32),
                                 static_cast<std::uint32_t>(ctr),
                                 static_cast<std::uint32_t>(ctr >> 32)},
                                key_);
      const double u1 = detail::to_open_unit(w[0], w[1]);
      const double u2 = detail::to_open_unit(w[2], w[3]);
      const double r = std::sqrt(-2.0 * std::log(u1));
      out[j] = r * std::cos(2.0 * M_PI * u2);
      if (j + 1 < n) out[j + 1] = r * std::sin(2.0 * M_PI * u2);
    }
  }

  Matrix gaussian_matrix(Index rows, Index cols,
                         std::uint64_t ctr_base = 0) const {
    Matrix g(rows, cols);
    for (Index c = 0; c < cols; ++c)
      fill(ctr_base + static_cast<std::uint64_t>(c), g.col(c));
    return g;
  }

 private:
  std::array<std::uint32_t, 2> key_;
};

// Uniform draws on [lo, hi), addressed by draw index.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t key)
      : key_{static_cast<std::uint32_t>(key),
             static_cast<std::uint32_t>(key >> 32)} {}

  double at(std::uint64_t index, double lo, double hi) const {
    const auto w = philox4x32({0u, 0u, static_cast<std::uint32_t>(index),
                               static_cast<std::uint32_t>(index >> 32)},
                              key_);
    return lo + (hi - lo) * detail::to_open_unit(w[0], w[1]);
  }

 private:
  std::array<std::uint32_t, 2> key_;
};

}  // namespace opca

#endif  // OPCA_PRNG_HPP
