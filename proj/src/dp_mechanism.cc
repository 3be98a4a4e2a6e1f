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

#include "dpfl/dp_mechanism.h"

#include <cmath>
#include <sstream>

#include "dpfl/errors.h"

namespace dpfl {

std::size_t DPConfig::batch_size() const {
  // Tolerance absorbs decimal rates such as 0.29 * 100 = 28.999999999999996.
  const double product = sample_rate * static_cast<double>(dataset_size);
  return static_cast<std::size_t>(std::floor(product + 1e-9));
}

double DPConfig::noise_std() const {
  return noise_multiplier * clip_norm / static_cast<double>(batch_size());
}

double DPConfig::noise_variance() const {
  const double std = noise_std();
  return std * std;
}

void DPConfig::validate() const {
  if (!(clip_norm > 0.0) || !std::isfinite(clip_norm)) {
    throw ConfigError("DPConfig: clip_norm must be finite and > 0");
  }
  if (!(noise_multiplier >= 0.0) || !std::isfinite(noise_multiplier)) {
    throw ConfigError("DPConfig: noise_multiplier must be finite and >= 0");
  }
  if (!(sample_rate > 0.0 && sample_rate <= 1.0)) {
    throw ConfigError("DPConfig: sample_rate must lie in (0, 1]");
  }
  if (dataset_size == 0) throw ConfigError("DPConfig: dataset_size is 0");
  if (batch_size() < 1) {
    std::ostringstream msg;
    msg << "DPConfig: floor(s*R) = 0 for s=" << sample_rate
        << ", R=" << dataset_size;
    throw ConfigError(msg.str());
  }
}

NoiseStream::NoiseStream(const NoiseKey& key)
    : engine_(make_engine(key.seed, StreamTag::kNoise,
                          {key.round, key.client, key.step})) {}

void NoiseStream::add_noise(std::span<double> out, double std) {
  if (std == 0.0) return;
  std::normal_distribution<double> normal(0.0, std);
  for (double& x : out) x += normal(engine_);
}

ParamVector clip(const ParamVector& g, double clip_norm) {
  if (!(clip_norm > 0.0)) throw ContractViolation("clip: C must be > 0");
  if (!g.all_finite()) throw ContractViolation("clip: non-finite gradient");
  const double norm = l2_norm(g);
  if (norm <= clip_norm) return g;
  double scale = clip_norm / norm;
  ParamVector out = scale * g;
  // Rounding can leave the norm one ulp above C; shrink until it is not.
  while (l2_norm(out) > clip_norm) {
    scale = std::nextafter(scale, 0.0);
    out = scale * g;
  }
  return out;
}

ParamVector noisy_batch_mean(std::span<const ParamVector> clipped,
                             const DPConfig& cfg, NoiseStream& noise) {
  if (clipped.empty()) throw ContractViolation("noisy_batch_mean: empty batch");
  const std::size_t b = cfg.batch_size();
  if (clipped.size() != b) {
    std::ostringstream msg;
    msg << "noisy_batch_mean: got " << clipped.size()
        << " gradients, expected floor(s*R) = " << b;
    throw ContractViolation(msg.str());
  }
  const std::size_t d = clipped.front().dim();
  ParamVector sum(d);
  for (const ParamVector& g : clipped) {
    require_same_dim(g.dim(), d, "noisy_batch_mean");
    if (l2_norm(g) > cfg.clip_norm + 1e-9) {
      throw ContractViolation("noisy_batch_mean: gradient exceeds clip norm");
    }
    axpy(1.0, g.span(), sum.span());
  }
  const double denom = static_cast<double>(b);
  for (double& x : sum) x /= denom;
  noise.add_noise(sum.span(), cfg.noise_std());
  return sum;
}

}  // namespace dpfl
