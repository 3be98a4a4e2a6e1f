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

#ifndef DPFL_ACCOUNTANT_H_
#define DPFL_ACCOUNTANT_H_

#include <cstdint>
#include <vector>

namespace dpfl {

// Renyi-DP accounting for sample-level privacy of DP-SGD style training.
//
// Each local step is a (Poisson-)subsampled Gaussian mechanism with noise
// multiplier sigma and sampling rate q. RDP composes additively per order;
// the (epsilon, delta) conversion uses
//   epsilon = min_order [ rdp_total(order) + log(1/delta) / (order - 1) ].
// Fixed-size batches are accounted at q = s, the usual approximation.

// {1.25, 1.5, 1.75, 2, 3, ..., 64, 128, 256, 512}
std::vector<double> default_orders();

// order / (2 sigma^2): RDP of the Gaussian mechanism with sensitivity 1.
double gaussian_rdp(double order, double sigma);

// Upper bound on the RDP of the Poisson-subsampled Gaussian mechanism.
// Integer orders >= 2 use the binomial expansion
//   A = sum_k C(a,k) (1-q)^(a-k) q^k exp((k^2 - k) / (2 sigma^2)),
//   rdp = log(A) / (a - 1),
// evaluated in log space. Fractional orders are bounded by the value at
// ceil(order) (RDP is non-decreasing in the order) and by gaussian_rdp.
// q = 1 returns gaussian_rdp exactly.
double subsampled_gaussian_rdp(double order, double sigma, double q);

struct PrivacyEvent {
  double noise_multiplier = 1.0;
  double sample_rate = 1.0;
  std::uint64_t steps = 0;
};

class PrivacyLedger {
 public:
  explicit PrivacyLedger(std::vector<double> orders = default_orders());

  // Appends `steps` compositions of the subsampled Gaussian (sigma, q).
  void record(double noise_multiplier, double sample_rate,
              std::uint64_t steps);

  const std::vector<PrivacyEvent>& events() const { return events_; }
  const std::vector<double>& orders() const { return orders_; }
  bool empty() const { return events_.empty(); }

  // Total RDP at each order. Events with equal (sigma, q) are merged
  // before multiplying, so splitting an event never changes the result.
  std::vector<double> total_rdp() const;

 private:
  std::vector<double> orders_;
  std::vector<PrivacyEvent> events_;
};

struct Budget {
  double epsilon = 0.0;
  double delta = 0.0;
  double order = 0.0;  // minimizing RDP order (0 when not applicable)
};

// Empty ledger -> epsilon = 0.
Budget compose_and_convert(const PrivacyLedger& ledger, double delta);

// Closed-form third-party budget with the O(.) constant taken as 1:
//   s * sqrt(T K log(2/delta) log(2T/delta)) / sigma.
// Asymptotic reference value only; not a certified bound.
double third_party_epsilon(double sample_rate, double rounds,
                           double local_steps, double delta, double sigma);

// Accumulated budget towards the server for client participation rate l:
//   epsilon_s = epsilon sqrt(N / l),  delta_s = (delta / 2)(1/l + 1).
Budget server_budget(double epsilon, double delta, double num_clients,
                     double participation);

}  // namespace dpfl

#endif  // DPFL_ACCOUNTANT_H_
