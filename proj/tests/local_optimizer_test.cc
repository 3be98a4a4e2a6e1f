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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dpfl/dp_mechanism.h"
#include "dpfl/errors.h"
#include "dpfl/model.h"

namespace dpfl {
namespace {

// Number of representable doubles strictly between a and b, plus one.
int ulp_distance(double a, double b) {
  int n = 0;
  while (a != b && n < 1000) {
    a = std::nextafter(a, b);
    ++n;
  }
  return n;
}

AdamWHyper hyper(double lr = 1e-2, double wd = 0.0, double gamma = 0.0) {
  AdamWHyper h;
  h.lr = lr;
  h.weight_decay = wd;
  h.gamma = gamma;
  h.eps = 1e-8;
  return h;
}

TEST(InitRound, ZeroAndWarmStart) {
  DPAdamWState s(4, hyper());
  s.init_round(ParamVector(4));
  EXPECT_EQ(s.m(), ParamVector(4));
  EXPECT_EQ(s.v(), ParamVector(4));
  EXPECT_EQ(s.k(), 0);
  EXPECT_FALSE(s.warm_started());

  auto layout = std::make_shared<const BlockLayout>(
      BlockLayout::from_sizes({{"A", 2}, {"B", 2}}));
  s.accumulate(ParamVector(4, 1.0));
  s.init_round(broadcast_blocks(BlockStats(layout, {1.5, 3.5})));
  EXPECT_EQ(s.v(), (ParamVector{1.5, 1.5, 3.5, 3.5}));
  EXPECT_EQ(s.m(), ParamVector(4));
  EXPECT_EQ(s.k(), 0);
  EXPECT_TRUE(s.warm_started());
  EXPECT_THROW(s.init_round(ParamVector{1.0, -1.0, 0.0, 0.0}),
               ContractViolation);
}

TEST(MomentUpdate, FirstStepIdentities) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 1000; ++trial) {
    DPAdamWState s(6, hyper());
    s.init_round(ParamVector(6));
    ParamVector g(6);
    for (double& x : g) x = normal(rng);
    const MomentEstimates e = moment_update(s, g);
    EXPECT_EQ(s.k(), 1);
    for (std::size_t i = 0; i < 6; ++i) {
      EXPECT_LE(ulp_distance(e.m_hat[i], g[i]), 1);
      EXPECT_LE(ulp_distance(e.v_hat[i], g[i] * g[i]), 2);
    }
  }
}

TEST(MomentUpdate, ConstantGradientLimit) {
  DPAdamWState s(3, hyper());
  s.init_round(ParamVector(3));
  const ParamVector g{0.3, -2.0, 1e-3};
  MomentEstimates e;
  for (int k = 0; k < 20000; ++k) e = moment_update(s, g);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(e.m_hat[i], g[i], 1e-12 * std::abs(g[i]));
    EXPECT_NEAR(e.v_hat[i], g[i] * g[i], 1e-9 * g[i] * g[i]);
  }
}

TEST(MomentUpdate, CorrectionAtZeroStepsIsContractViolation) {
  DPAdamWState s(2, hyper());
  s.init_round(ParamVector(2));
  EXPECT_THROW(corrected_moments(s), ContractViolation);
}

TEST(MomentUpdate, NonStrictTreatsWarmMassAsComplete) {
  AdamWHyper h = hyper();
  DPAdamWState s(1, h);
  s.init_round(ParamVector{0.04});
  s.accumulate(ParamVector{0.1});
  const double v = h.beta2 * 0.04 + (1.0 - h.beta2) * 0.01;
  EXPECT_DOUBLE_EQ(corrected_moments(s, false).v_hat[0], v);
  EXPECT_DOUBLE_EQ(corrected_moments(s, true).v_hat[0],
                   v / (1.0 - h.beta2));
  // A cold start is unaffected by the flag.
  DPAdamWState cold(1, h);
  cold.init_round(ParamVector(1));
  cold.accumulate(ParamVector{0.1});
  EXPECT_EQ(corrected_moments(cold, false).v_hat,
            corrected_moments(cold, true).v_hat);
}

TEST(CorrectedPreconditioner, Examples) {
  const double eps = 1e-8;
  EXPECT_EQ(corrected_preconditioner(ParamVector{1e-4}, 1e-4, eps)[0],
            1.0 / eps);
  DPConfig cfg{0.1, 1.0, 0.1, 100};
  ASSERT_DOUBLE_EQ(cfg.noise_variance(), 1e-4);
  EXPECT_NEAR(corrected_preconditioner(ParamVector{0.0101}, cfg, eps)[0],
              1.0 / (0.1 + eps), 1e-12 / 0.1);
  EXPECT_EQ(corrected_preconditioner(ParamVector{0.0}, 0.5, eps)[0], 1.0 / eps);
}

TEST(CorrectedPreconditioner, ZeroNoiseIsVanillaAdamBitExact) {
  std::mt19937_64 rng(2);
  std::exponential_distribution<double> expo(100.0);
  ParamVector v(1000);
  for (double& x : v) x = expo(rng);
  const ParamVector got = corrected_preconditioner(v, 0.0, 1e-8);
  for (std::size_t i = 0; i < v.dim(); ++i) {
    ASSERT_EQ(got[i], 1.0 / (std::sqrt(v[i]) + 1e-8));
  }
}

TEST(CorrectedPreconditioner, BoundedInOpenUnitOverEps) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> log_v(-12.0, 2.0);
  std::uniform_real_distribution<double> log_n(-10.0, 0.0);
  std::uniform_real_distribution<double> log_e(-10.0, -1.0);
  for (int i = 0; i < 100000; ++i) {
    const double eps = std::pow(10.0, log_e(rng));
    const ParamVector out = corrected_preconditioner(
        ParamVector{std::pow(10.0, log_v(rng))}, std::pow(10.0, log_n(rng)),
        eps);
    ASSERT_GT(out[0], 0.0);
    ASSERT_LE(out[0], 1.0 / eps);
  }
}

TEST(LocalStep, PureDecayAndReduction) {
  const AdamWHyper h = hyper(0.1, 0.5);
  const ParamVector theta{2.0, -4.0};
  const ParamVector zero(2);
  const ParamVector out = local_step(h, zero, ParamVector(2, 1.0), zero, theta);
  EXPECT_EQ(out, (ParamVector{(1.0 - 0.05) * 2.0, (1.0 - 0.05) * -4.0}));

  // gamma = 0, lambda = 0: one AdamW step without decay.
  const AdamWHyper plain = hyper(0.1);
  const ParamVector m_hat{0.3, -0.2};
  const ParamVector pre{2.0, 5.0};
  const ParamVector step = local_step(plain, m_hat, pre, ParamVector{9.0, 9.0}, theta);
  EXPECT_EQ(step, (ParamVector{2.0 - 0.1 * 0.6, -4.0 - 0.1 * -1.0}));
}

TEST(LocalStep, DecayShrinksWeights) {
  const AdamWHyper h = hyper(0.01, 0.1);
  ParamVector theta{5.0, -5.0};
  for (int k = 0; k < 10; ++k) {
    const ParamVector next =
        local_step(h, ParamVector(2), ParamVector(2, 1.0), ParamVector(2), theta);
    EXPECT_LT(l2_norm(next), l2_norm(theta));
    theta = next;
  }
}

TEST(LocalStep, NonFiniteResultIsNumericalError) {
  const AdamWHyper h = hyper(1.0);
  const ParamVector big{std::numeric_limits<double>::max()};
  EXPECT_THROW(local_step(h, big, ParamVector{10.0}, ParamVector(1), ParamVector{0.0}),
               NumericalError);
  EXPECT_THROW(sgd_local_step(ParamVector{1.0}, ParamVector{NAN}, 0.1),
               NumericalError);
}

// Straight-line rendering of one client's local loop for the quadratic
// model (identity curvature), written without the library's optimizer.
TEST(LocalStep, MatchesStraightLineOracleOnQuadratic) {
  const Model model = Model::quadratic(3);
  const Sample sample{{1.0, -2.0, 0.5}, 0};
  const double b1 = 0.9, b2 = 0.999, eps = 1e-3, lr = 0.05, wd = 0.01,
               gamma = 0.5;
  const double noise_var = 1e-4;
  const std::vector<double> align = {0.2, -0.1, 0.05};
  const std::vector<double> v_warm = {0.01, 0.01, 0.02};

  AdamWHyper h;
  h.beta1 = b1;
  h.beta2 = b2;
  h.eps = eps;
  h.lr = lr;
  h.weight_decay = wd;
  h.gamma = gamma;
  DPAdamWState state(3, h);
  state.init_round(ParamVector(v_warm));
  ParamVector theta{0.0, 0.0, 0.0};

  std::vector<double> t = {0.0, 0.0, 0.0};
  std::vector<double> m = {0.0, 0.0, 0.0};
  std::vector<double> v = v_warm;
  for (int k = 1; k <= 5; ++k) {
    const ParamVector g = model.per_sample_grad(theta, sample);
    const MomentEstimates e = moment_update(state, g);
    theta = local_step(h, e.m_hat,
                       corrected_preconditioner(e.v_hat, noise_var, eps),
                       ParamVector(align), theta);

    for (int i = 0; i < 3; ++i) {
      const double gi = t[i] - sample.features[i];
      m[i] = b1 * m[i] + (1.0 - b1) * gi;
      v[i] = b2 * v[i] + (1.0 - b2) * gi * gi;
      const double mh = m[i] / (1.0 - std::pow(b1, k));
      const double vh = v[i] / (1.0 - std::pow(b2, k));
      const double pre = 1.0 / (std::sqrt(std::max(vh - noise_var, 0.0)) + eps);
      t[i] = t[i] - lr * (mh * pre + gamma * align[i]) - (lr * wd) * t[i];
    }
    for (int i = 0; i < 3; ++i) ASSERT_EQ(theta[i], t[i]) << "k=" << k;
  }
}

TEST(SgdLocalStep, Basics) {
  const ParamVector theta{1.0, 2.0};
  EXPECT_EQ(sgd_local_step(theta, ParamVector(2), 0.3), theta);
  EXPECT_EQ(sgd_local_step(theta, ParamVector{5.0, 5.0}, 0.0), theta);
  EXPECT_EQ(sgd_local_step(theta, ParamVector{1.0, -1.0}, 0.5),
            (ParamVector{0.5, 2.5}));
}

TEST(SgdLocalStep, QuadraticLossNonIncreasing) {
  const Model model = Model::quadratic(4, 1, {1.0, 3.0, 0.5, 2.0});
  const Sample s{{1.0, -1.0, 2.0, 0.0}, 0};
  ParamVector theta{5.0, 5.0, -5.0, 5.0};
  double prev = model.loss(theta, s);
  for (int k = 0; k < 200; ++k) {
    theta = sgd_local_step(theta, model.per_sample_grad(theta, s), 0.05);
    const double now = model.loss(theta, s);
    ASSERT_LE(now, prev);
    prev = now;
  }
}

TEST(Hyper, Validation) {
  AdamWHyper h;
  EXPECT_NO_THROW(h.validate());
  h.beta2 = 1.0;
  EXPECT_THROW(h.validate(), ConfigError);
  h = AdamWHyper{};
  h.eps = 0.0;
  EXPECT_THROW(h.validate(), ConfigError);
  h = AdamWHyper{};
  h.gamma = -0.1;
  EXPECT_THROW(h.validate(), ConfigError);
  EXPECT_THROW(parse_variant("fedprox"), ConfigError);
  EXPECT_EQ(parse_variant(to_string(OptimizerVariant::kDpLocalAdamW)),
            OptimizerVariant::kDpLocalAdamW);
}

}  // namespace
}  // namespace dpfl
