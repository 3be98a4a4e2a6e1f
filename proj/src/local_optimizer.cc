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

#include "dpfl/local_optimizer.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpfl/errors.h"

namespace dpfl {
namespace {

void check_finite_or_dump(const ParamVector& out, const ParamVector& theta,
                          const char* where) {
  if (out.all_finite()) return;
  std::ostringstream msg;
  msg.precision(6);
  msg << where << ": non-finite parameters after update; |theta|="
      << l2_norm(theta) << ", first entries:";
  for (std::size_t i = 0; i < std::min<std::size_t>(out.dim(), 8); ++i) {
    msg << ' ' << out[i];
  }
  throw NumericalError(msg.str());
}

}  // namespace

std::string to_string(OptimizerVariant variant) {
  switch (variant) {
    case OptimizerVariant::kDpFedAdamW:
      return "dp_fedadamw";
    case OptimizerVariant::kDpLocalAdamW:
      return "dp_local_adamw";
    case OptimizerVariant::kDpFedAvgSgd:
      return "dp_fedavg_sgd";
  }
  return "unknown";
}

OptimizerVariant parse_variant(const std::string& name) {
  if (name == "dp_fedadamw") return OptimizerVariant::kDpFedAdamW;
  if (name == "dp_local_adamw") return OptimizerVariant::kDpLocalAdamW;
  if (name == "dp_fedavg_sgd") return OptimizerVariant::kDpFedAvgSgd;
  throw ConfigError("unknown variant '" + name + "'");
}

void AdamWHyper::validate() const {
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must be in [0,1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must be in [0,1)");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be > 0");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be > 0");
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw ConfigError("weight_decay must be >= 0");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("gamma must be >= 0");
  }
}

DPAdamWState::DPAdamWState(std::size_t dim, const AdamWHyper& hyper)
    : hyper_(hyper), m_(dim), v_(dim) {}

void DPAdamWState::init_round(const ParamVector& v_warm) {
  require_same_dim(v_warm.dim(), v_.dim(), "init_round");
  for (double x : v_warm) {
    if (!(x >= 0.0)) throw ContractViolation("init_round: warm v must be >= 0");
  }
  std::fill(m_.begin(), m_.end(), 0.0);
  v_ = v_warm;
  k_ = 0;
  warm_started_ =
      std::any_of(v_warm.begin(), v_warm.end(), [](double x) { return x > 0; });
}

void DPAdamWState::accumulate(const ParamVector& g) {
  require_same_dim(g.dim(), m_.dim(), "moment_update");
  const double b1 = hyper_.beta1;
  const double b2 = hyper_.beta2;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * g[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * g[i] * g[i];
  }
  ++k_;
}

MomentEstimates corrected_moments(const DPAdamWState& state,
                                  bool strict_alg1) {
  if (state.k() < 1) {
    throw ContractViolation("corrected_moments: bias correction at k = 0");
  }
  const AdamWHyper& h = state.hyper();
  const double b1k = std::pow(h.beta1, state.k());
  const double b2k = std::pow(h.beta2, state.k());
  const double m_denom = 1.0 - b1k;
  double v_denom = 1.0 - b2k;
  if (!strict_alg1 && state.warm_started()) v_denom += b2k;

  MomentEstimates out{ParamVector(state.m().dim()),
                      ParamVector(state.v().dim())};
  for (std::size_t i = 0; i < state.m().dim(); ++i) {
    out.m_hat[i] = state.m()[i] / m_denom;
    out.v_hat[i] = state.v()[i] / v_denom;
  }
  return out;
}

MomentEstimates moment_update(DPAdamWState& state, const ParamVector& g,
                              bool strict_alg1) {
  state.accumulate(g);
  return corrected_moments(state, strict_alg1);
}

ParamVector corrected_preconditioner(const ParamVector& v_hat,
                                     double noise_variance, double eps) {
  ParamVector out(v_hat.dim());
  for (std::size_t i = 0; i < v_hat.dim(); ++i) {
    const double centered = std::max(v_hat[i] - noise_variance, 0.0);
    out[i] = 1.0 / (std::sqrt(centered) + eps);
  }
  return out;
}

ParamVector local_step(const AdamWHyper& hyper, const ParamVector& m_hat,
                       const ParamVector& precond, const ParamVector& align,
                       const ParamVector& theta) {
  const std::size_t d = theta.dim();
  require_same_dim(m_hat.dim(), d, "local_step m_hat");
  require_same_dim(precond.dim(), d, "local_step preconditioner");
  require_same_dim(align.dim(), d, "local_step alignment");
  const double lr = hyper.lr;
  const double decay = hyper.lr * hyper.weight_decay;
  ParamVector out(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double direction = m_hat[i] * precond[i] + hyper.gamma * align[i];
    out[i] = theta[i] - lr * direction - decay * theta[i];
  }
  check_finite_or_dump(out, theta, "local_step");
  return out;
}

ParamVector sgd_local_step(const ParamVector& theta, const ParamVector& g,
                           double lr, double weight_decay) {
  require_same_dim(g.dim(), theta.dim(), "sgd_local_step");
  const double decay = lr * weight_decay;
  ParamVector out(theta.dim());
  for (std::size_t i = 0; i < theta.dim(); ++i) {
    out[i] = theta[i] - lr * g[i] - decay * theta[i];
  }
  check_finite_or_dump(out, theta, "sgd_local_step");
  return out;
}

}  // namespace dpfl
