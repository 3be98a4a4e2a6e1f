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

#ifndef DPFL_DIAGNOSTICS_H_
#define DPFL_DIAGNOSTICS_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dpfl/dp_mechanism.h"
#include "dpfl/federation.h"
#include "dpfl/param.h"

namespace dpfl {

// Mean over coordinates of the unbiased (n-1) variance across clients.
// Needs at least two vectors of equal dimension.
double cross_client_var_v(std::span<const ParamVector> vs);

// (1/S) sum_i |theta_i - mean_j theta_j|^2. Translation invariant.
double client_drift(std::span<const ParamVector> endpoints);

// Fixed-edge histogram; values outside [lo, hi) land in the edge bins so
// the total mass always equals the number of values.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::size_t> counts;

  static Histogram build(std::span<const double> values, double lo, double hi,
                         std::size_t bins);
  std::size_t mass() const;
  double bin_lo(std::size_t b) const;
  double bin_hi(std::size_t b) const;
};

// Monte-Carlo estimate of the second-moment bias under a constant true
// gradient g (clipping inactive, |g| < C). Each run draws
// g~_k = g + N(0, (sigma C / b)^2 I) for k = 1..steps and applies the v
// recursion from v_0 = 0.
struct BiasProbeResult {
  ParamVector mean_v;            // E[v_k]
  ParamVector mean_v_hat;        // E[v_k / (1 - beta2^k)]
  ParamVector mean_v_corrected;  // E[v_hat - (sigma C / b)^2]
  ParamVector stderr_v;          // Monte-Carlo standard errors
  ParamVector stderr_v_hat;      // (also the stderr of mean_v_corrected)
  double noise_variance = 0.0;
  double init_factor = 0.0;      // 1 - beta2^k
};

inline constexpr std::size_t kMinProbeRuns = 10000;

BiasProbeResult bias_probe(const DPConfig& cfg, const ParamVector& g,
                           int steps, std::size_t n_mc, std::uint64_t key,
                           double beta2 = 0.999,
                           ExecutionPolicy policy = ExecutionPolicy::kParallel);

// One row of the per-round metrics CSV plus the moment histograms.
struct MetricRecord {
  std::uint64_t t = 0;
  double global_loss = 0.0;
  double global_acc = 0.0;
  double var_v = 0.0;
  double drift = 0.0;
  std::size_t uplink = 0;
  std::size_t downlink = 0;
  double eps_rdp = 0.0;
  double eps_paper = 0.0;
  Histogram hist_m;
  Histogram hist_sqrt_v;
};

// 17 significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string format_real(double x);

void write_metrics_header(std::ostream& out);
void append_metric(std::ostream& out, const MetricRecord& record);

void write_histogram_header(std::ostream& out);
void append_histograms(std::ostream& out, const MetricRecord& record);

}  // namespace dpfl

#endif  // DPFL_DIAGNOSTICS_H_
