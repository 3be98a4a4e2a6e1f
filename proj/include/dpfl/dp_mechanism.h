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

#ifndef DPFL_DP_MECHANISM_H_
#define DPFL_DP_MECHANISM_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "dpfl/param.h"
#include "dpfl/rng.h"

namespace dpfl {

// Per-client DP parameters. The effective batch b = floor(s * R) is used
// both as the averaging denominator and in the noise scale sigma * C / b.
struct DPConfig {
  double clip_norm = 0.1;         // C
  double noise_multiplier = 1.0;  // sigma
  double sample_rate = 0.01;      // s
  std::size_t dataset_size = 1;   // R

  std::size_t batch_size() const;
  // Per-coordinate standard deviation of the injected noise.
  double noise_std() const;
  // (sigma * C / b)^2, the additive shift DP noise induces in E[g~ * g~].
  double noise_variance() const;
  void validate() const;
};

// Key of one noise draw: a fresh N(0, std^2 I) vector per local step.
struct NoiseKey {
  std::uint64_t seed = 0;
  std::uint64_t round = 0;
  std::uint64_t client = 0;
  std::uint64_t step = 0;
};

class NoiseStream {
 public:
  explicit NoiseStream(const NoiseKey& key);

  // Adds i.i.d. N(0, std^2) to every entry of `out`.
  void add_noise(std::span<double> out, double std);

 private:
  Engine engine_;
};

// g / max(1, |g| / C). The result's norm never exceeds C.
ParamVector clip(const ParamVector& g, double clip_norm);

// (1/b) * sum(clipped) + N(0, (sigma C / b)^2 I). `clipped` must hold
// exactly b vectors, each with norm <= C.
ParamVector noisy_batch_mean(std::span<const ParamVector> clipped,
                             const DPConfig& cfg, NoiseStream& noise);

}  // namespace dpfl

#endif  // DPFL_DP_MECHANISM_H_
