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

#include "dpfl/data.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "dpfl/errors.h"
#include "dpfl/rng.h"

namespace dpfl {
namespace {

constexpr int kMaxPartitionAttempts = 100;

std::vector<double> sample_dirichlet(std::size_t n, double alpha,
                                     Engine& engine) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> p(n);
  double total = 0.0;
  while (total <= 0.0) {
    total = 0.0;
    for (double& x : p) {
      x = gamma(engine);
      total += x;
    }
  }
  for (double& x : p) x /= total;
  return p;
}

}  // namespace

std::size_t FederatedDataset::total_samples() const {
  std::size_t n = 0;
  for (const auto& c : clients) n += c.size();
  return n;
}

std::vector<Sample> make_gauss_classes(std::size_t num_samples,
                                       std::size_t num_features,
                                       std::size_t num_classes,
                                       double separation, std::uint64_t seed) {
  if (num_classes < 2 || num_features == 0 || num_samples < num_classes) {
    throw ConfigError("gauss_classes: need >= 2 classes, >= 1 feature and "
                      "at least one sample per class");
  }
  Engine engine = make_engine(seed, StreamTag::kData, {0});
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> means(num_classes,
                                         std::vector<double>(num_features));
  for (auto& mu : means) {
    for (double& x : mu) x = separation * normal(engine);
  }
  std::vector<Sample> samples(num_samples);
  for (std::size_t n = 0; n < num_samples; ++n) {
    Sample& s = samples[n];
    s.label = static_cast<int>(n % num_classes);
    s.features.resize(num_features);
    for (std::size_t j = 0; j < num_features; ++j) {
      s.features[j] = means[static_cast<std::size_t>(s.label)][j] +
                      normal(engine);
    }
  }
  std::shuffle(samples.begin(), samples.end(), engine);
  return samples;
}

std::vector<ParamVector> make_client_quadratics(std::size_t dim,
                                                std::size_t num_clients,
                                                double heterogeneity,
                                                std::uint64_t seed) {
  if (dim == 0 || num_clients == 0) {
    throw ConfigError("client_quadratics: dim and num_clients must be > 0");
  }
  if (!(heterogeneity >= 0.0)) {
    throw ConfigError("client_quadratics: heterogeneity must be >= 0");
  }
  Engine engine = make_engine(seed, StreamTag::kData, {1});
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ParamVector> centers(num_clients, ParamVector(dim));
  for (auto& a : centers) {
    for (double& x : a) x = heterogeneity * normal(engine);
  }
  return centers;
}

FederatedDataset quadratic_client_data(const std::vector<ParamVector>& centers,
                                       std::size_t samples_per_client,
                                       double spread, std::uint64_t seed) {
  if (samples_per_client == 0) {
    throw ConfigError("quadratic data: samples_per_client must be > 0");
  }
  FederatedDataset out;
  out.centers = centers;
  out.clients.resize(centers.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    Engine engine = make_engine(seed, StreamTag::kData, {2, i});
    auto& client = out.clients[i];
    client.resize(samples_per_client);
    for (Sample& s : client) {
      s.features.resize(centers[i].dim());
      for (std::size_t j = 0; j < centers[i].dim(); ++j) {
        s.features[j] = centers[i][j] + spread * normal(engine);
      }
    }
  }
  return out;
}

double center_dissimilarity(const std::vector<ParamVector>& centers) {
  if (centers.empty()) return 0.0;
  ParamVector mean(centers.front().dim());
  for (const auto& a : centers) axpy(1.0, a.span(), mean.span());
  for (double& x : mean) x /= static_cast<double>(centers.size());
  double total = 0.0;
  for (const auto& a : centers) {
    const double r = l2_norm(a - mean);
    total += r * r;
  }
  return std::sqrt(total / static_cast<double>(centers.size()));
}

FederatedDataset dirichlet_partition(const std::vector<Sample>& samples,
                                     std::size_t num_clients,
                                     std::size_t num_classes, double alpha,
                                     std::uint64_t seed) {
  if (num_clients < 2) throw ConfigError("dirichlet: need N >= 2 clients");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("dirichlet: alpha must be finite and > 0");
  }
  if (samples.size() < num_clients) {
    throw ConfigError("dirichlet: fewer samples than clients");
  }
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const int label = samples[n].label;
    if (label < 0 || static_cast<std::size_t>(label) >= num_classes) {
      throw ConfigError("dirichlet: sample label out of range");
    }
    by_class[static_cast<std::size_t>(label)].push_back(n);
  }

  for (int attempt = 0; attempt < kMaxPartitionAttempts; ++attempt) {
    Engine engine = make_engine(seed, StreamTag::kPartition,
                                {static_cast<std::uint64_t>(attempt)});
    std::vector<std::vector<std::size_t>> assignment(num_clients);
    for (std::size_t c = 0; c < num_classes; ++c) {
      std::vector<std::size_t> idx = by_class[c];
      std::shuffle(idx.begin(), idx.end(), engine);
      const std::vector<double> p = sample_dirichlet(num_clients, alpha, engine);
      const double n_c = static_cast<double>(idx.size());
      double cumulative = 0.0;
      std::size_t start = 0;
      for (std::size_t i = 0; i < num_clients; ++i) {
        cumulative += p[i];
        std::size_t stop =
            (i + 1 == num_clients)
                ? idx.size()
                : std::min(idx.size(),
                           static_cast<std::size_t>(std::floor(cumulative * n_c)));
        stop = std::max(stop, start);
        for (std::size_t j = start; j < stop; ++j) {
          assignment[i].push_back(idx[j]);
        }
        start = stop;
      }
    }
    const bool any_empty =
        std::any_of(assignment.begin(), assignment.end(),
                    [](const auto& a) { return a.empty(); });
    if (any_empty) continue;

    FederatedDataset out;
    out.num_classes = num_classes;
    out.alpha = alpha;
    out.clients.resize(num_clients);
    for (std::size_t i = 0; i < num_clients; ++i) {
      std::sort(assignment[i].begin(), assignment[i].end());
      out.clients[i].reserve(assignment[i].size());
      for (std::size_t n : assignment[i]) out.clients[i].push_back(samples[n]);
    }
    return out;
  }
  throw ConfigError("dirichlet: could not produce a partition without empty "
                    "clients in 100 attempts; raise alpha or sample count");
}

std::vector<Sample> load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("CSV '" + path + "' is empty");
  std::size_t columns = 1;
  for (char ch : line) columns += (ch == ',') ? 1 : 0;
  if (columns < 2) throw ConfigError("CSV header needs f1..fp,label");

  std::vector<Sample> samples;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw ConfigError("CSV row " + std::to_string(row) +
                          ": non-numeric cell '" + cell + "'");
      }
    }
    if (values.size() != columns) {
      throw ConfigError("CSV row " + std::to_string(row) + ": expected " +
                        std::to_string(columns) + " cells");
    }
    Sample s;
    const double label = values.back();
    if (label < 0 || label != std::floor(label)) {
      throw ConfigError("CSV row " + std::to_string(row) +
                        ": label must be a non-negative integer");
    }
    s.label = static_cast<int>(label);
    values.pop_back();
    s.features = std::move(values);
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw ConfigError("CSV '" + path + "' has no rows");
  return samples;
}

std::vector<std::size_t> class_histogram(const std::vector<Sample>& samples,
                                         std::size_t num_classes) {
  std::vector<std::size_t> h(num_classes, 0);
  for (const auto& s : samples) {
    if (s.label >= 0 && static_cast<std::size_t>(s.label) < num_classes) {
      ++h[static_cast<std::size_t>(s.label)];
    }
  }
  return h;
}

}  // namespace dpfl
