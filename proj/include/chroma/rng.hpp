// Copyright 2026 The Chroma Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS-IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Reproducible random streams.
//
// Every random quantity in the library is drawn from a std::mt19937_64
// engine whose seed is derived from a 64-bit master seed with SplitMix64:
//
//   seed(master, stream, index) = splitmix(splitmix(master ^ tag(stream)) + index)
//
// `stream` separates unrelated consumers (packing, net, rotations, ...);
// `index` separates items inside one consumer (rotation i, shell j). The
// draw for item i therefore does not depend on how many items came before
// it, on the thread that computes it, or on how a batch is split.
//
// Gaussians come from std::normal_distribution, so bit-exact streams are
// guaranteed per standard library implementation (libstdc++ here).

#pragma once

#include <cstdint>
#include <random>

namespace chroma {

enum class Stream : std::uint64_t {
  kPacking = 0x11,
  kNet = 0x12,
  kRotations = 0x13,
  kSaturation = 0x14,
  kDensity = 0x15,
  kPairs = 0x16,
  kFacets = 0x17,
  kHaar = 0x18,
  kShells = 0x19,
  kUser = 0x20,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                                    std::uint64_t index = 0) noexcept {
  const auto tag = static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL;
  return splitmix64(splitmix64(master ^ tag) + index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, Stream stream, std::uint64_t index = 0)
      : engine_(derive_seed(master, stream, index)) {}

  double normal() { return normal_(engine_); }
  // Uniform on [0, 1).
  double uniform() { return uniform_(engine_); }
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace chroma
