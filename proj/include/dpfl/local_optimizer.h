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

#ifndef DPFL_LOCAL_OPTIMIZER_H_
#define DPFL_LOCAL_OPTIMIZER_H_

#include <cstddef>
#include <string>

#include "dpfl/dp_mechanism.h"
#include "dpfl/param.h"

namespace dpfl {

enum class OptimizerVariant { kDpFedAdamW, kDpLocalAdamW, kDpFedAvgSgd };

std::string to_string(OptimizerVariant variant);
OptimizerVariant parse_variant(const std::string& name);

struct AdamWHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double lr = 1e-3;
  double weight_decay = 0.0;  // lambda, decoupled
  double gamma = 0.0;         // alignment coefficient

  void validate() const;
};

// Component switches of the client update.
struct LocalOptions {
  // Subtract the DP noise variance from v-hat inside the preconditioner.
  bool bias_correction = true;
  // Divide v by (1 - beta2^k) even when v was warm-started from the server
  // statistics. When false, a warm-started v counts as full-mass and the
  // divisor becomes 1 - beta2^k + beta2^k = 1.
  bool strict_alg1 = true;
  // Replace the adaptive preconditioner by all-ones (reduces to momentum
  // SGD; with beta1 = 0 to plain SGD).
  bool identity_preconditioner = false;
};

// One client's AdamW moments for the current round.
class DPAdamWState {
 public:
  DPAdamWState(std::size_t dim, const AdamWHyper& hyper);

  // Start of round: m = 0, k = 0, v = v_warm (all-zero for the baselines).
  void init_round(const ParamVector& v_warm);

  const ParamVector& m() const { return m_; }
  const ParamVector& v() const { return v_; }
  int k() const { return k_; }
  const AdamWHyper& hyper() const { return hyper_; }
  bool warm_started() const { return warm_started_; }

  // m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g*g,  k <- k + 1.
  void accumulate(const ParamVector& noisy_grad);

 private:
  AdamWHyper hyper_;
  ParamVector m_;
  ParamVector v_;
  int k_ = 0;
  bool warm_started_ = false;
};

struct MomentEstimates {
  ParamVector m_hat;
  ParamVector v_hat;
};

// Initialization-bias corrected moments of the current state. Throws
// ContractViolation when no step has been accumulated (k = 0).
MomentEstimates corrected_moments(const DPAdamWState& state,
                                  bool strict_alg1 = true);

// accumulate() followed by corrected_moments().
MomentEstimates moment_update(DPAdamWState& state, const ParamVector& noisy_grad,
                              bool strict_alg1 = true);

// 1 / (sqrt(max(v_hat - noise_variance, 0)) + eps), per coordinate.
// Always in (0, 1/eps].
ParamVector corrected_preconditioner(const ParamVector& v_hat,
                                     double noise_variance, double eps);
inline ParamVector corrected_preconditioner(const ParamVector& v_hat,
                                            const DPConfig& cfg, double eps) {
  return corrected_preconditioner(v_hat, cfg.noise_variance(), eps);
}

// theta - lr * (m_hat * precond + gamma * align) - lr * weight_decay * theta.
// Throws NumericalError when the result is not finite.
ParamVector local_step(const AdamWHyper& hyper, const ParamVector& m_hat,
                       const ParamVector& precond, const ParamVector& align,
                       const ParamVector& theta);

// theta - lr * g - lr * weight_decay * theta.
ParamVector sgd_local_step(const ParamVector& theta, const ParamVector& g,
                           double lr, double weight_decay = 0.0);

}  // namespace dpfl

#endif  // DPFL_LOCAL_OPTIMIZER_H_
