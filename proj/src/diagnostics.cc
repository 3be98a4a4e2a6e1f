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

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dpfl/errors.h"
#include "dpfl/rng.h"

namespace dpfl {

double cross_client_var_v(std::span<const ParamVector> vs) {
  if (vs.size() < 2) {
    throw ContractViolation("cross_client_var_v: need at least 2 clients");
  }
  const std::size_t d = vs.front().dim();
  for (const auto& v : vs) require_same_dim(v.dim(), d, "cross_client_var_v");
  if (d == 0) return 0.0;
  // Welford per coordinate.
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (const auto& v : vs) {
      ++n;
      const double delta = v[i] - mean;
      mean += delta / static_cast<double>(n);
      m2 += delta * (v[i] - mean);
    }
    total += m2 / static_cast<double>(n - 1);
  }
  return total / static_cast<double>(d);
}

double client_drift(std::span<const ParamVector> endpoints) {
  if (endpoints.size() < 2) {
    throw ContractViolation("client_drift: need at least 2 clients");
  }
  const std::size_t d = endpoints.front().dim();
  ParamVector center(d);
  for (const auto& e : endpoints) {
    require_same_dim(e.dim(), d, "client_drift");
    axpy(1.0, e.span(), center.span());
  }
  const double s = static_cast<double>(endpoints.size());
  for (double& x : center) x /= s;
  double total = 0.0;
  for (const auto& e : endpoints) {
    for (std::size_t i = 0; i < d; ++i) {
      const double r = e[i] - center[i];
      total += r * r;
    }
  }
  return total / s;
}

Histogram Histogram::build(std::span<const double> values, double lo,
                           double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) {
    throw ConfigError("Histogram: need bins >= 1 and hi > lo");
  }
  Histogram h{lo, hi, std::vector<std::size_t>(bins, 0)};
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double x : values) {
    std::size_t b = 0;
    if (x >= hi) {
      b = bins - 1;
    } else if (x > lo) {  // NaN falls through to bin 0
      b = std::min(bins - 1, static_cast<std::size_t>((x - lo) / width));
    }
    ++h.counts[b];
  }
  return h;
}

std::size_t Histogram::mass() const {
  std::size_t m = 0;
  for (auto c : counts) m += c;
  return m;
}

double Histogram::bin_lo(std::size_t b) const {
  return lo + (hi - lo) * static_cast<double>(b) /
                  static_cast<double>(counts.size());
}

double Histogram::bin_hi(std::size_t b) const { return bin_lo(b + 1); }

BiasProbeResult bias_probe(const DPConfig& cfg, const ParamVector& g,
                           int steps, std::size_t n_mc, std::uint64_t key,
                           double beta2, ExecutionPolicy policy) {
  cfg.validate();
  if (l2_norm(g) >= cfg.clip_norm) {
    throw ConfigError("bias_probe: |g| must be < C so clipping stays inactive");
  }
  if (steps < 1) throw ConfigError("bias_probe: steps must be >= 1");
  if (n_mc < kMinProbeRuns) {
    throw ContractViolation("bias_probe: need at least 10^4 Monte-Carlo runs");
  }
  if (!(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("bias_probe: beta2 must lie in [0, 1)");
  }

  const std::size_t d = g.dim();
  const double noise_std = cfg.noise_std();
  std::vector<double> finals(n_mc * d);
  const auto runs = static_cast<std::int64_t>(n_mc);

  auto one_run = [&](std::int64_t r) {
    Engine engine = make_engine(key, StreamTag::kProbe,
                                {static_cast<std::uint64_t>(r)});
    std::normal_distribution<double> normal(0.0, 1.0);
    double* v = finals.data() + static_cast<std::size_t>(r) * d;
    std::fill(v, v + d, 0.0);
    for (int k = 0; k < steps; ++k) {
      for (std::size_t i = 0; i < d; ++i) {
        const double noisy = g[i] + noise_std * normal(engine);
        v[i] = beta2 * v[i] + (1.0 - beta2) * noisy * noisy;
      }
    }
  };
  if (policy == ExecutionPolicy::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < runs; ++r) one_run(r);
  } else {
    for (std::int64_t r = 0; r < runs; ++r) one_run(r);
  }

  BiasProbeResult out;
  out.noise_variance = cfg.noise_variance();
  out.init_factor = 1.0 - std::pow(beta2, steps);
  out.mean_v = ParamVector(d);
  out.stderr_v = ParamVector(d);
  const double n = static_cast<double>(n_mc);
  for (std::size_t i = 0; i < d; ++i) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n_mc; ++r) mean += finals[r * d + i];
    mean /= n;
    double ss = 0.0;
    for (std::size_t r = 0; r < n_mc; ++r) {
      const double dv = finals[r * d + i] - mean;
      ss += dv * dv;
    }
    out.mean_v[i] = mean;
    out.stderr_v[i] = std::sqrt(ss / (n - 1.0) / n);
  }
  out.mean_v_hat = (1.0 / out.init_factor) * out.mean_v;
  out.stderr_v_hat = (1.0 / out.init_factor) * out.stderr_v;
  out.mean_v_corrected = ParamVector(d);
  for (std::size_t i = 0; i < d; ++i) {
    out.mean_v_corrected[i] = out.mean_v_hat[i] - out.noise_variance;
  }
  return out;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_metrics_header(std::ostream& out) {
  out << "t,global_loss,global_acc,var_v,drift,uplink,downlink,eps_rdp,"
         "eps_paper\n";
}

void append_metric(std::ostream& out, const MetricRecord& r) {
  out << r.t << ',' << format_real(r.global_loss) << ','
      << format_real(r.global_acc) << ',' << format_real(r.var_v) << ','
      << format_real(r.drift) << ',' << r.uplink << ',' << r.downlink << ','
      << format_real(r.eps_rdp) << ',' << format_real(r.eps_paper) << '\n';
}

void write_histogram_header(std::ostream& out) {
  out << "t,quantity,bin,lo,hi,count\n";
}

void append_histograms(std::ostream& out, const MetricRecord& r) {
  auto emit = [&](const char* name, const Histogram& h) {
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      out << r.t << ',' << name << ',' << b << ',' << format_real(h.bin_lo(b))
          << ',' << format_real(h.bin_hi(b)) << ',' << h.counts[b] << '\n';
    }
  };
  emit("m", r.hist_m);
  emit("sqrt_v_hat", r.hist_sqrt_v);
}

}  // namespace dpfl
