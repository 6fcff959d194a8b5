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

#ifndef PATHINT_RNG_HPP_
#define PATHINT_RNG_HPP_

#include <array>
#include <cstdint>
#include <span>

namespace pathint {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Every output block is a pure function of (counter, key), so any sample can
/// be regenerated independently of how work is scheduled.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// Mixes a master seed and a tag into an independent 64-bit seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);

/// Maps 64 random bits onto the open interval (0, 1).
double uniform_open(std::uint64_t bits);

/// Fills `out` with standard normal draws addressed by (seed, row, column, stream).
/// Entry j of the row uses Philox block (row, column, j / 2, stream) and one half
/// of its Box-Muller pair, so rows can be generated in any order.
void fill_standard_normals(std::uint64_t seed, std::uint32_t row, std::uint32_t column,
                           std::uint32_t stream, std::span<double> out);

/// Uniforms on (0, 1), addressed the same way as fill_standard_normals.
void fill_uniforms(std::uint64_t seed, std::uint32_t row, std::uint32_t column,
                   std::uint32_t stream, std::span<double> out);

/// Stream tags used across the library; distinct tags never share blocks.
namespace streams {
inline constexpr std::uint32_t kControlNoise = 1;
inline constexpr std::uint32_t kLogNormalMix = 2;
inline constexpr std::uint32_t kPlantNoise = 3;
inline constexpr std::uint32_t kParameterSamples = 4;
inline constexpr std::uint32_t kInitialState = 5;
inline constexpr std::uint32_t kEstimators = 6;
}  // namespace streams

}  // namespace pathint

#endif  // PATHINT_RNG_HPP_
