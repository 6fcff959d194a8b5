// Copyright 2026 The pathint Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pathint/rng.hpp"

#include <cmath>
#include <numbers>

namespace pathint {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

Philox4x32::Counter block(std::uint64_t seed, std::uint32_t row, std::uint32_t column,
                          std::uint32_t index, std::uint32_t stream) {
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed),
                            static_cast<std::uint32_t>(seed >> 32)};
  return Philox4x32::generate({row, column, index, stream}, key);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter counter, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, counter[0], hi0, lo0);
    mulhilo(kMul1, counter[2], hi1, lo1);
    counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
  }
  return counter;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

void fill_uniforms(std::uint64_t seed, std::uint32_t row, std::uint32_t column,
                   std::uint32_t stream, std::span<double> out) {
  for (std::size_t j = 0; j < out.size(); j += 2) {
    const auto r = block(seed, row, column, static_cast<std::uint32_t>(j / 2), stream);
    out[j] = uniform_open((static_cast<std::uint64_t>(r[0]) << 32) | r[1]);
    if (j + 1 < out.size()) {
      out[j + 1] = uniform_open((static_cast<std::uint64_t>(r[2]) << 32) | r[3]);
    }
  }
}

void fill_standard_normals(std::uint64_t seed, std::uint32_t row, std::uint32_t column,
                           std::uint32_t stream, std::span<double> out) {
  for (std::size_t j = 0; j < out.size(); j += 2) {
    const auto r = block(seed, row, column, static_cast<std::uint32_t>(j / 2), stream);
    const double u1 = uniform_open((static_cast<std::uint64_t>(r[0]) << 32) | r[1]);
    const double u2 = uniform_open((static_cast<std::uint64_t>(r[2]) << 32) | r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[j] = radius * std::cos(angle);
    if (j + 1 < out.size()) {
      out[j + 1] = radius * std::sin(angle);
    }
  }
}

}  // namespace pathint
