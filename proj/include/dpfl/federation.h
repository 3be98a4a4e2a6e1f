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

#ifndef DPFL_FEDERATION_H_
#define DPFL_FEDERATION_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dpfl/data.h"
#include "dpfl/local_optimizer.h"
#include "dpfl/model.h"
#include "dpfl/param.h"

namespace dpfl {

// What clients upload besides their parameter delta:
//   kNone       nothing (NoAgg)
//   kFullV      the whole second-moment vector (Agg-v, 2d floats)
//   kBlockMeanV one mean of v per block (Agg-mean-v, d + B floats)
enum class AggregationMode { kNone, kFullV, kBlockMeanV };

std::string to_string(AggregationMode mode);
AggregationMode parse_aggregation(const std::string& name);

// kSerial is the reference path; kParallel runs the clients of a round on
// OpenMP threads. Both fold reports in ascending client id and produce
// bit-identical results.
enum class ExecutionPolicy { kSerial, kParallel };

struct FederationConfig {
  OptimizerVariant variant = OptimizerVariant::kDpFedAdamW;
  AdamWHyper hyper;
  LocalOptions local;
  AggregationMode aggregation = AggregationMode::kBlockMeanV;
  std::size_t clients_per_round = 1;  // S
  std::size_t local_steps = 1;        // K
  double sample_rate = 0.1;           // s
  double clip_norm = 0.1;             // C
  double noise_multiplier = 1.0;      // sigma
  std::uint64_t seed = 0;
  ExecutionPolicy policy = ExecutionPolicy::kParallel;

  // Baselines neither aggregate v nor align nor bias-correct; these return
  // the switches actually in force for the configured variant.
  AggregationMode effective_aggregation() const;
  bool uses_alignment() const;
  bool uses_bias_correction() const;
  void validate(std::size_t num_clients) const;
};

// Layout over which v-bar lives for a given aggregation mode.
std::shared_ptr<const BlockLayout> aggregation_layout(const Model& model,
                                                      AggregationMode mode);

// Server state between rounds. delta_g and v_bar start at zero.
struct RoundState {
  std::uint64_t t = 0;
  ParamVector theta;
  BlockStats v_bar;
  ParamVector delta_g;

  static RoundState initial(ParamVector theta0,
                            std::shared_ptr<const BlockLayout> agg_layout);
};

struct ClientReport {
  std::size_t client_id = 0;
  // Transmitted.
  ParamVector delta;  // theta_i^{t,K} - theta^t
  BlockStats block_v;
  std::size_t uplink_floats = 0;
  // Simulator-side copies for diagnostics; never counted as payload.
  ParamVector endpoint;
  ParamVector m;
  ParamVector v;
  ParamVector sqrt_v_hat;
};

struct Payload {
  std::size_t uplink = 0;
  std::size_t downlink = 0;
};

struct CommProfile {
  AggregationMode aggregation = AggregationMode::kNone;
  bool broadcasts_alignment = false;
};

// Floats per client per round. Uplink: d (+B or +d for the aggregated v);
// downlink: theta (+v-bar) (+delta_g).
Payload payload_count(const CommProfile& profile, std::size_t d,
                      std::size_t num_blocks);
Payload payload_count(OptimizerVariant variant, std::size_t d,
                      std::size_t num_blocks);
CommProfile comm_profile(const FederationConfig& cfg);

// Uniform S-of-N subset without replacement, ascending ids.
std::vector<std::size_t> sample_clients(std::size_t num_clients,
                                        std::size_t clients_per_round,
                                        std::uint64_t seed,
                                        std::uint64_t round);

// K local DP steps of one client starting from the broadcast state.
ClientReport run_client(const RoundState& state, std::size_t client_id,
                        const Model& model, const std::vector<Sample>& data,
                        const FederationConfig& cfg);

// Server update from a full set of reports (sorted by client id):
//   theta   += (1/S) sum delta_i
//   delta_g  = -(1/(S K lr)) sum delta_i
//   v_bar    = (1/S) sum block_v_i           (unless aggregation is kNone)
RoundState aggregate(const RoundState& state,
                     std::span<const ClientReport> reports,
                     const FederationConfig& cfg);

struct RoundResult {
  RoundState next;
  std::vector<ClientReport> reports;
  Payload payload;  // per participating client
};

RoundResult run_round(const RoundState& state, const Model& model,
                      const FederatedDataset& data, const FederationConfig& cfg);

struct Evaluation {
  double loss = 0.0;      // (1/N) sum_i mean loss on client i
  double accuracy = 0.0;  // pooled; NaN for the quadratic model
};

Evaluation evaluate(const Model& model, const ParamVector& theta,
                    const FederatedDataset& data,
                    ExecutionPolicy policy = ExecutionPolicy::kParallel);

}  // namespace dpfl

#endif  // DPFL_FEDERATION_H_
