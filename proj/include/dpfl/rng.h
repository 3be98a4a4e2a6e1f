// Copyright 2026 The DPFL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPFL_RNG_H_
#define DPFL_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dpfl {

// Every random draw in a run comes from an engine seeded by a key derived
// from (run seed, stream tag, coordinates...). Identical keys give identical
// streams no matter which thread or in which order they are consumed.
enum class StreamTag : std::uint64_t {
  kNoise = 1,
  kBatch = 2,
  kClientSampling = 3,
  kInit = 4,
  kData = 5,
  kPartition = 6,
  kProbe = 7,
};

using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_key(std::uint64_t seed, StreamTag tag,
                         std::initializer_list<std::uint64_t> coords = {});

inline Engine make_engine(std::uint64_t seed, StreamTag tag,
                          std::initializer_list<std::uint64_t> coords = {}) {
  return Engine(derive_key(seed, tag, coords));
}

}  // namespace dpfl

#endif  // DPFL_RNG_H_
