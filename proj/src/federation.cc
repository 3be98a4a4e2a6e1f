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

#include "dpfl/federation.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

#include "dpfl/dp_mechanism.h"
#include "dpfl/errors.h"
#include "dpfl/rng.h"

namespace dpfl {
namespace {

// Runs body(j) for j in [0, n). Exceptions are captured per slot and the
// first one (lowest j) is rethrown after the barrier.
template <class Body>
void for_each_slot(std::size_t n, ExecutionPolicy policy, Body body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
  if (policy == ExecutionPolicy::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t j = 0; j < count; ++j) {
      try {
        body(static_cast<std::size_t>(j));
      } catch (...) {
        errors[static_cast<std::size_t>(j)] = std::current_exception();
      }
    }
  } else {
    for (std::int64_t j = 0; j < count; ++j) {
      try {
        body(static_cast<std::size_t>(j));
      } catch (...) {
        errors[static_cast<std::size_t>(j)] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

DPConfig client_dp_config(const FederationConfig& cfg, std::size_t size) {
  DPConfig dp;
  dp.clip_norm = cfg.clip_norm;
  dp.noise_multiplier = cfg.noise_multiplier;
  dp.dataset_size = size;
  // Tiny clients still take one sample per step.
  dp.sample_rate = std::max(cfg.sample_rate, 1.0 / static_cast<double>(size));
  return dp;
}

}  // namespace

std::string to_string(AggregationMode mode) {
  switch (mode) {
    case AggregationMode::kNone:
      return "none";
    case AggregationMode::kFullV:
      return "full";
    case AggregationMode::kBlockMeanV:
      return "block_mean";
  }
  return "unknown";
}

AggregationMode parse_aggregation(const std::string& name) {
  if (name == "none") return AggregationMode::kNone;
  if (name == "full") return AggregationMode::kFullV;
  if (name == "block_mean") return AggregationMode::kBlockMeanV;
  throw ConfigError("unknown aggregation mode '" + name + "'");
}

AggregationMode FederationConfig::effective_aggregation() const {
  return variant == OptimizerVariant::kDpFedAdamW ? aggregation
                                                  : AggregationMode::kNone;
}

bool FederationConfig::uses_alignment() const {
  return variant == OptimizerVariant::kDpFedAdamW && hyper.gamma != 0.0;
}

bool FederationConfig::uses_bias_correction() const {
  return variant == OptimizerVariant::kDpFedAdamW && local.bias_correction;
}

void FederationConfig::validate(std::size_t num_clients) const {
  hyper.validate();
  if (clients_per_round < 1 || clients_per_round > num_clients) {
    throw ConfigError("clients_per_round must satisfy 1 <= S <= N");
  }
  if (local_steps < 1) throw ConfigError("local_steps must be >= 1");
  if (!(sample_rate > 0.0 && sample_rate <= 1.0)) {
    throw ConfigError("sample_rate must lie in (0, 1]");
  }
  if (!(clip_norm > 0.0) || !std::isfinite(clip_norm)) {
    throw ConfigError("clip_norm must be finite and > 0");
  }
  if (!(noise_multiplier >= 0.0) || !std::isfinite(noise_multiplier)) {
    throw ConfigError("noise_multiplier must be finite and >= 0");
  }
}

std::shared_ptr<const BlockLayout> aggregation_layout(const Model& model,
                                                      AggregationMode mode) {
  if (mode == AggregationMode::kFullV) {
    return std::make_shared<const BlockLayout>(
        BlockLayout::singletons(model.dim()));
  }
  return model.layout_ptr();
}

RoundState RoundState::initial(ParamVector theta0,
                               std::shared_ptr<const BlockLayout> agg_layout) {
  require_same_dim(theta0.dim(), agg_layout->dim(), "RoundState");
  const std::size_t d = theta0.dim();
  return RoundState{0, std::move(theta0), BlockStats::zeros(std::move(agg_layout)),
                    ParamVector(d)};
}

Payload payload_count(const CommProfile& profile, std::size_t d,
                      std::size_t num_blocks) {
  if (d < 1 || num_blocks < 1 || num_blocks > d) {
    throw ConfigError("payload_count: need d >= B >= 1");
  }
  std::size_t v_floats = 0;
  switch (profile.aggregation) {
    case AggregationMode::kNone:
      v_floats = 0;
      break;
    case AggregationMode::kFullV:
      v_floats = d;
      break;
    case AggregationMode::kBlockMeanV:
      v_floats = num_blocks;
      break;
  }
  Payload p;
  p.uplink = d + v_floats;
  p.downlink = d + v_floats + (profile.broadcasts_alignment ? d : 0);
  return p;
}

Payload payload_count(OptimizerVariant variant, std::size_t d,
                      std::size_t num_blocks) {
  CommProfile profile;
  if (variant == OptimizerVariant::kDpFedAdamW) {
    profile.aggregation = AggregationMode::kBlockMeanV;
    profile.broadcasts_alignment = true;
  }
  return payload_count(profile, d, num_blocks);
}

CommProfile comm_profile(const FederationConfig& cfg) {
  return CommProfile{cfg.effective_aggregation(), cfg.uses_alignment()};
}

std::vector<std::size_t> sample_clients(std::size_t num_clients,
                                        std::size_t clients_per_round,
                                        std::uint64_t seed,
                                        std::uint64_t round) {
  if (clients_per_round < 1 || clients_per_round > num_clients) {
    throw ConfigError("sample_clients: need 1 <= S <= N");
  }
  std::vector<std::size_t> all(num_clients);
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (clients_per_round == num_clients) return all;
  Engine engine = make_engine(seed, StreamTag::kClientSampling, {round});
  std::vector<std::size_t> chosen;
  chosen.reserve(clients_per_round);
  std::sample(all.begin(), all.end(), std::back_inserter(chosen),
              static_cast<std::ptrdiff_t>(clients_per_round), engine);
  return chosen;
}

ClientReport run_client(const RoundState& state, std::size_t client_id,
                        const Model& model, const std::vector<Sample>& data,
                        const FederationConfig& cfg) {
  const std::size_t d = model.dim();
  require_same_dim(state.theta.dim(), d, "run_client");
  if (data.empty()) throw ConfigError("run_client: client has no samples");

  const DPConfig dp = client_dp_config(cfg, data.size());
  const std::size_t batch = dp.batch_size();
  const bool adam = cfg.variant != OptimizerVariant::kDpFedAvgSgd;
  const AggregationMode agg = cfg.effective_aggregation();
  const std::shared_ptr<const BlockLayout>& agg_layout =
      state.v_bar.layout_ptr();

  AdamWHyper hyper = cfg.hyper;
  if (!cfg.uses_alignment()) hyper.gamma = 0.0;
  const double noise_var = cfg.uses_bias_correction() ? dp.noise_variance() : 0.0;
  const ParamVector zeros(d);
  const ParamVector& align = cfg.uses_alignment() ? state.delta_g : zeros;

  DPAdamWState opt(d, hyper);
  if (adam) {
    opt.init_round(agg == AggregationMode::kNone ? zeros
                                                 : broadcast_blocks(state.v_bar));
  }

  ParamVector theta = state.theta;
  MomentEstimates last{ParamVector(d), ParamVector(d)};
  std::vector<std::size_t> indices(data.size());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  std::vector<std::size_t> chosen;
  std::vector<ParamVector> clipped(batch);
  ParamVector grad(d);

  for (std::size_t k = 1; k <= cfg.local_steps; ++k) {
    Engine batch_engine =
        make_engine(cfg.seed, StreamTag::kBatch, {state.t, client_id, k});
    chosen.clear();
    std::sample(indices.begin(), indices.end(), std::back_inserter(chosen),
                static_cast<std::ptrdiff_t>(batch), batch_engine);
    for (std::size_t j = 0; j < batch; ++j) {
      model.per_sample_grad(theta.span(), data[chosen[j]], grad.span());
      clipped[j] = clip(grad, cfg.clip_norm);
    }
    NoiseStream noise(NoiseKey{cfg.seed, state.t, client_id, k});
    const ParamVector noisy = noisy_batch_mean(clipped, dp, noise);

    if (!adam) {
      theta = sgd_local_step(theta, noisy, hyper.lr, hyper.weight_decay);
      continue;
    }
    last = moment_update(opt, noisy, cfg.local.strict_alg1);
    const ParamVector precond =
        cfg.local.identity_preconditioner
            ? ParamVector(d, 1.0)
            : corrected_preconditioner(last.v_hat, noise_var, hyper.eps);
    theta = local_step(hyper, last.m_hat, precond, align, theta);
  }

  ClientReport report{client_id,
                      theta - state.theta,
                      BlockStats::zeros(agg_layout),
                      payload_count(comm_profile(cfg), d,
                                    model.layout().num_blocks())
                          .uplink,
                      theta,
                      {},
                      {},
                      {}};
  if (adam) {
    if (agg != AggregationMode::kNone) {
      report.block_v = block_mean(opt.v(), agg_layout);
    }
    report.m = opt.m();
    report.v = opt.v();
    report.sqrt_v_hat = ParamVector(d);
    for (std::size_t i = 0; i < d; ++i) {
      report.sqrt_v_hat[i] = std::sqrt(last.v_hat[i]);
    }
  }
  return report;
}

RoundState aggregate(const RoundState& state,
                     std::span<const ClientReport> reports,
                     const FederationConfig& cfg) {
  if (reports.empty()) throw ContractViolation("aggregate: no reports");
  const std::size_t d = state.theta.dim();
  const double s = static_cast<double>(reports.size());
  ParamVector sum(d);
  std::vector<double> v_sum(state.v_bar.size(), 0.0);
  for (const ClientReport& r : reports) {
    require_same_dim(r.delta.dim(), d, "aggregate delta");
    axpy(1.0, r.delta.span(), sum.span());
    require_same_dim(r.block_v.size(), v_sum.size(), "aggregate block_v");
    for (std::size_t b = 0; b < v_sum.size(); ++b) v_sum[b] += r.block_v[b];
  }

  RoundState next;
  next.t = state.t + 1;
  next.theta = ParamVector(d);
  next.delta_g = ParamVector(d);
  const double align_scale =
      -1.0 / (s * static_cast<double>(cfg.local_steps) * cfg.hyper.lr);
  for (std::size_t i = 0; i < d; ++i) {
    next.theta[i] = state.theta[i] + sum[i] / s;
    next.delta_g[i] = align_scale * sum[i];
  }
  if (cfg.effective_aggregation() == AggregationMode::kNone) {
    next.v_bar = state.v_bar;
  } else {
    for (double& x : v_sum) x /= s;
    next.v_bar = BlockStats(state.v_bar.layout_ptr(), std::move(v_sum));
  }
  if (!next.theta.all_finite()) {
    throw NumericalError("aggregate: non-finite global model at round " +
                         std::to_string(next.t));
  }
  return next;
}

RoundResult run_round(const RoundState& state, const Model& model,
                      const FederatedDataset& data,
                      const FederationConfig& cfg) {
  cfg.validate(data.num_clients());
  const std::vector<std::size_t> ids = sample_clients(
      data.num_clients(), cfg.clients_per_round, cfg.seed, state.t);

  std::vector<ClientReport> reports(ids.size());
  for_each_slot(ids.size(), cfg.policy, [&](std::size_t j) {
    reports[j] = run_client(state, ids[j], model, data.clients[ids[j]], cfg);
  });

  RoundResult result{aggregate(state, reports, cfg), std::move(reports),
                     payload_count(comm_profile(cfg), model.dim(),
                                   model.layout().num_blocks())};
  return result;
}

Evaluation evaluate(const Model& model, const ParamVector& theta,
                    const FederatedDataset& data, ExecutionPolicy policy) {
  const std::size_t n = data.num_clients();
  std::vector<double> client_loss(n, 0.0);
  std::vector<std::size_t> client_correct(n, 0);
  for_each_slot(n, policy, [&](std::size_t i) {
    double total = 0.0;
    std::size_t correct = 0;
    for (const Sample& s : data.clients[i]) {
      total += model.loss(theta.span(), s);
      if (model.is_classifier() && model.predict(theta.span(), s) == s.label) {
        ++correct;
      }
    }
    client_loss[i] =
        data.clients[i].empty() ? 0.0
                                : total / static_cast<double>(data.clients[i].size());
    client_correct[i] = correct;
  });
  Evaluation out;
  double loss_sum = 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    loss_sum += client_loss[i];
    correct += client_correct[i];
  }
  out.loss = loss_sum / static_cast<double>(n);
  out.accuracy = model.is_classifier()
                     ? static_cast<double>(correct) /
                           static_cast<double>(data.total_samples())
                     : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace dpfl
