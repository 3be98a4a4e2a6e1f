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

#include "dpfl/diagnostics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "dpfl/errors.h"
#include "oracles.h"

namespace dpfl {
namespace {

DPConfig probe_config(double sigma) {
  DPConfig cfg;
  cfg.clip_norm = 0.1;
  cfg.noise_multiplier = sigma;
  cfg.sample_rate = 0.1;
  cfg.dataset_size = 100;  // b = 10
  return cfg;
}

TEST(VarV, HandExamples) {
  const std::vector<ParamVector> two = {ParamVector{0.0}, ParamVector{2.0}};
  EXPECT_EQ(cross_client_var_v(two), 2.0);
  const std::vector<ParamVector> same(5, ParamVector{0.3, -1.0, 7.0});
  EXPECT_EQ(cross_client_var_v(same), 0.0);
  const std::vector<ParamVector> one = {ParamVector{1.0}};
  EXPECT_THROW(cross_client_var_v(one), ContractViolation);
  const std::vector<ParamVector> ragged = {ParamVector{1.0},
                                           ParamVector{1.0, 2.0}};
  EXPECT_THROW(cross_client_var_v(ragged), ConfigError);
}

TEST(VarV, MatchesTwoPassOracle) {
  std::vector<ParamVector> vs;
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 7; ++i) {
    ParamVector v(13);
    for (std::size_t j = 0; j < 13; ++j) {
      v[j] = 1e-3 * std::sin(0.7 * i + 1.3 * j) + 5e-3;
    }
    vs.push_back(v);
    rows.emplace_back(v.begin(), v.end());
  }
  EXPECT_NEAR(cross_client_var_v(vs), oracle::mean_unbiased_variance(rows),
              1e-18);
}

TEST(Drift, SymmetricPairAndTranslationInvariance) {
  const ParamVector u{0.5, -1.5, 2.0};
  const std::vector<ParamVector> pair = {u, -1.0 * u};
  EXPECT_DOUBLE_EQ(client_drift(pair), dot(u.span(), u.span()));
  const ParamVector shift{10.0, -3.0, 0.25};
  const std::vector<ParamVector> moved = {u + shift, -1.0 * u + shift};
  EXPECT_NEAR(client_drift(moved), client_drift(pair), 1e-12);
  const std::vector<ParamVector> same(4, u);
  EXPECT_EQ(client_drift(same), 0.0);
  EXPECT_THROW(client_drift(std::vector<ParamVector>{u}), ContractViolation);
}

TEST(HistogramTest, MassEqualsCountWithClamping) {
  const std::vector<double> values = {-5.0, -0.1, 0.0,  0.02, 0.099,
                                      0.1,  3.0,  -0.0, std::nan("")};
  const Histogram h = Histogram::build(values, -0.1, 0.1, 4);
  EXPECT_EQ(h.mass(), values.size());
  EXPECT_EQ(h.counts[0], 3u);  // -5, -0.1, nan
  EXPECT_EQ(h.counts[2], 3u);  // 0, 0.02, -0
  EXPECT_EQ(h.counts[3], 3u);  // 0.099, 0.1, 3
  EXPECT_DOUBLE_EQ(h.bin_lo(1), -0.05);
  EXPECT_DOUBLE_EQ(h.bin_hi(3), 0.1);
  EXPECT_THROW(Histogram::build(values, 1.0, 1.0, 4), ConfigError);
  EXPECT_THROW(Histogram::build(values, 0.0, 1.0, 0), ConfigError);
}

TEST(BiasProbe, NoiselessRecoversSquaredGradient) {
  const ParamVector g{0.05, -0.03, 0.0};
  const auto r = bias_probe(probe_config(0.0), g, 50, kMinProbeRuns, 1);
  for (std::size_t i = 0; i < g.dim(); ++i) {
    EXPECT_NEAR(r.mean_v_hat[i], g[i] * g[i], 1e-15);
    EXPECT_EQ(r.mean_v_corrected[i], r.mean_v_hat[i]);
    EXPECT_LT(r.stderr_v[i], 1e-15);
  }
  EXPECT_EQ(r.noise_variance, 0.0);
}

TEST(BiasProbe, ShiftAndCorrection) {
  const ParamVector g{0.05, -0.03};
  const auto r = bias_probe(probe_config(1.0), g, 50, 20000, 2);
  EXPECT_DOUBLE_EQ(r.noise_variance, 1e-4);
  EXPECT_DOUBLE_EQ(r.init_factor, 1.0 - std::pow(0.999, 50));
  for (std::size_t i = 0; i < g.dim(); ++i) {
    const double g2 = g[i] * g[i];
    EXPECT_NEAR(r.mean_v_hat[i] - g2, 1e-4, 5.0 * r.stderr_v_hat[i]);
    EXPECT_NEAR(r.mean_v_corrected[i], g2, 5.0 * r.stderr_v_hat[i]);
    EXPECT_GT(std::abs(r.mean_v_hat[i] - g2), 5.0 * r.stderr_v_hat[i]);
    EXPECT_NEAR(r.mean_v[i], r.init_factor * (g2 + 1e-4),
                5.0 * r.stderr_v[i]);
  }
}

TEST(BiasProbe, SerialAndParallelAgreeBitwise) {
  const ParamVector g{0.02, 0.01, -0.04};
  const auto a =
      bias_probe(probe_config(1.0), g, 20, 10000, 3, 0.999, ExecutionPolicy::kSerial);
  const auto b = bias_probe(probe_config(1.0), g, 20, 10000, 3, 0.999,
                            ExecutionPolicy::kParallel);
  for (std::size_t i = 0; i < g.dim(); ++i) {
    EXPECT_EQ(a.mean_v[i], b.mean_v[i]);
    EXPECT_EQ(a.stderr_v[i], b.stderr_v[i]);
  }
}

TEST(BiasProbe, RejectsInvalidInputs) {
  const ParamVector g{0.05};
  EXPECT_THROW(bias_probe(probe_config(1.0), g, 50, 9999, 0), ContractViolation);
  EXPECT_THROW(bias_probe(probe_config(1.0), ParamVector{0.1}, 50, 10000, 0),
               ConfigError);
  EXPECT_THROW(bias_probe(probe_config(1.0), g, 0, 10000, 0), ConfigError);
  EXPECT_THROW(bias_probe(probe_config(1.0), g, 5, 10000, 0, 1.0), ConfigError);
}

TEST(FormatReal, SeventeenDigitsAndNonFinite) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(1.0), "1");
  EXPECT_EQ(format_real(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_real(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_real(std::nan("")), "nan");
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23}) {
    EXPECT_EQ(std::stod(format_real(x)), x);
  }
}

TEST(MetricsCsv, HeaderAndRow) {
  std::ostringstream out;
  write_metrics_header(out);
  MetricRecord r;
  r.t = 3;
  r.global_loss = 0.5;
  r.global_acc = std::nan("");
  r.var_v = 0.25;
  r.drift = 2.0;
  r.uplink = 12;
  r.downlink = 24;
  r.eps_rdp = 1.5;
  r.eps_paper = 0.75;
  append_metric(out, r);
  EXPECT_EQ(out.str(),
            "t,global_loss,global_acc,var_v,drift,uplink,downlink,eps_rdp,"
            "eps_paper\n3,0.5,nan,0.25,2,12,24,1.5,0.75\n");
}

TEST(HistogramCsv, RowsPerBin) {
  MetricRecord r;
  r.t = 1;
  const std::vector<double> m = {-0.5, 0.5};
  const std::vector<double> s = {0.25};
  r.hist_m = Histogram::build(m, -1.0, 1.0, 2);
  r.hist_sqrt_v = Histogram::build(s, 0.0, 1.0, 2);
  std::ostringstream out;
  write_histogram_header(out);
  append_histograms(out, r);
  EXPECT_EQ(out.str(),
            "t,quantity,bin,lo,hi,count\n"
            "1,m,0,-1,0,1\n1,m,1,0,1,1\n"
            "1,sqrt_v_hat,0,0,0.5,1\n1,sqrt_v_hat,1,0.5,1,0\n");
}

}  // namespace
}  // namespace dpfl
