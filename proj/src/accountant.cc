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

#include "dpfl/accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "dpfl/errors.h"

namespace dpfl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_sigma_q(double sigma, double q) {
  if (!(sigma > 0.0)) throw ConfigError("RDP: noise multiplier must be > 0");
  if (!(q > 0.0 && q <= 1.0)) throw ConfigError("RDP: q must lie in (0, 1]");
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double integer_order_rdp(int order, double sigma, double q) {
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> terms(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k <= order; ++k) {
    terms[static_cast<std::size_t>(k)] =
        log_binomial(order, k) + (order - k) * log_1mq + k * log_q +
        (static_cast<double>(k) * k - k) * inv_two_var;
  }
  const double top = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  const double log_a = top + std::log(sum);
  return std::max(log_a, 0.0) / (order - 1);
}

}  // namespace

std::vector<double> default_orders() {
  std::vector<double> orders = {1.25, 1.5, 1.75};
  for (int a = 2; a <= 64; ++a) orders.push_back(a);
  orders.push_back(128);
  orders.push_back(256);
  orders.push_back(512);
  return orders;
}

double gaussian_rdp(double order, double sigma) {
  if (!(order > 1.0)) throw ConfigError("gaussian_rdp: order must be > 1");
  if (!(sigma > 0.0)) throw ConfigError("gaussian_rdp: sigma must be > 0");
  return order / (2.0 * sigma * sigma);
}

double subsampled_gaussian_rdp(double order, double sigma, double q) {
  if (!(order > 1.0)) {
    throw ConfigError("subsampled_gaussian_rdp: order must be > 1");
  }
  check_sigma_q(sigma, q);
  const double full = gaussian_rdp(order, sigma);
  if (q == 1.0) return full;
  const double ceil_order = std::max(2.0, std::ceil(order));
  if (ceil_order > 1e6) throw ConfigError("subsampled_gaussian_rdp: order too large");
  const double bound =
      integer_order_rdp(static_cast<int>(ceil_order), sigma, q);
  return std::min(full, bound);
}

PrivacyLedger::PrivacyLedger(std::vector<double> orders)
    : orders_(std::move(orders)) {
  if (orders_.empty()) throw ConfigError("PrivacyLedger: empty order grid");
  for (double a : orders_) {
    if (!(a > 1.0)) throw ConfigError("PrivacyLedger: orders must be > 1");
  }
}

void PrivacyLedger::record(double noise_multiplier, double sample_rate,
                           std::uint64_t steps) {
  check_sigma_q(noise_multiplier, sample_rate);
  events_.push_back({noise_multiplier, sample_rate, steps});
}

std::vector<double> PrivacyLedger::total_rdp() const {
  std::map<std::pair<double, double>, std::uint64_t> merged;
  for (const auto& e : events_) {
    merged[{e.noise_multiplier, e.sample_rate}] += e.steps;
  }
  std::vector<double> total(orders_.size(), 0.0);
  for (const auto& [key, steps] : merged) {
    if (steps == 0) continue;
    for (std::size_t j = 0; j < orders_.size(); ++j) {
      total[j] += static_cast<double>(steps) *
                  subsampled_gaussian_rdp(orders_[j], key.first, key.second);
    }
  }
  return total;
}

Budget compose_and_convert(const PrivacyLedger& ledger, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("compose_and_convert: delta must lie in (0, 1)");
  }
  Budget best{0.0, delta, 0.0};
  bool any_steps = false;
  for (const auto& e : ledger.events()) any_steps |= e.steps > 0;
  if (!any_steps) return best;

  const std::vector<double> total = ledger.total_rdp();
  best.epsilon = kInf;
  const double log_inv_delta = -std::log(delta);
  for (std::size_t j = 0; j < total.size(); ++j) {
    const double order = ledger.orders()[j];
    const double eps = total[j] + log_inv_delta / (order - 1.0);
    if (eps < best.epsilon) {
      best.epsilon = eps;
      best.order = order;
    }
  }
  return best;
}

double third_party_epsilon(double sample_rate, double rounds,
                           double local_steps, double delta, double sigma) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("third_party_epsilon: delta must lie in (0, 1)");
  }
  if (!(sample_rate > 0.0) || !(rounds >= 0.0) || !(local_steps >= 0.0)) {
    throw ConfigError("third_party_epsilon: invalid s, T or K");
  }
  if (!(sigma >= 0.0)) throw ConfigError("third_party_epsilon: sigma < 0");
  if (rounds == 0.0 || local_steps == 0.0) return 0.0;
  if (sigma == 0.0) return kInf;
  return sample_rate *
         std::sqrt(rounds * local_steps * std::log(2.0 / delta) *
                   std::log(2.0 * rounds / delta)) /
         sigma;
}

Budget server_budget(double epsilon, double delta, double num_clients,
                     double participation) {
  if (!(participation > 0.0 && participation <= 1.0)) {
    throw ConfigError("server_budget: participation l must lie in (0, 1]");
  }
  if (!(num_clients >= 1.0)) throw ConfigError("server_budget: N must be >= 1");
  if (!(epsilon >= 0.0) || !(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("server_budget: invalid (epsilon, delta)");
  }
  Budget b;
  b.epsilon = epsilon * std::sqrt(num_clients / participation);
  b.delta = (delta / 2.0) * (1.0 / participation + 1.0);
  return b;
}

}  // namespace dpfl
