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

#ifndef DPFL_DATA_H_
#define DPFL_DATA_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dpfl/model.h"
#include "dpfl/param.h"

namespace dpfl {

// Samples split across N clients. `centers` is filled only for the
// client-quadratics benchmark (one center per client).
struct FederatedDataset {
  std::vector<std::vector<Sample>> clients;
  std::size_t num_classes = 0;
  double alpha = 0.0;
  std::vector<ParamVector> centers;

  std::size_t num_clients() const { return clients.size(); }
  std::size_t total_samples() const;
};

// Labeled Gaussian blobs: class means ~ N(0, separation^2 I), samples are
// mean + N(0, I). Labels cycle through the classes, then the set is
// shuffled.
std::vector<Sample> make_gauss_classes(std::size_t num_samples,
                                       std::size_t num_features,
                                       std::size_t num_classes,
                                       double separation, std::uint64_t seed);

// Per-client centers a_i = heterogeneity * u_i with u_i ~ N(0, I).
// heterogeneity = 0 gives identical (zero) centers.
std::vector<ParamVector> make_client_quadratics(std::size_t dim,
                                                std::size_t num_clients,
                                                double heterogeneity,
                                                std::uint64_t seed);

// R samples per client, each center a_i + spread * N(0, I).
FederatedDataset quadratic_client_data(const std::vector<ParamVector>& centers,
                                       std::size_t samples_per_client,
                                       double spread, std::uint64_t seed);

// sqrt(mean_i |a_i - mean(a)|^2): empirical client dissimilarity.
double center_dissimilarity(const std::vector<ParamVector>& centers);

// Per class c: p_c ~ Dir(alpha * 1_N); the class's shuffled samples are cut
// at floor(cumsum(p_c) * n_c). The whole partition is redrawn (up to 100
// attempts) while any client is empty.
FederatedDataset dirichlet_partition(const std::vector<Sample>& samples,
                                     std::size_t num_clients,
                                     std::size_t num_classes, double alpha,
                                     std::uint64_t seed);

// Reads "f1,...,fp,label" with a mandatory header row.
std::vector<Sample> load_csv(const std::string& path);

// Class counts of one client's samples.
std::vector<std::size_t> class_histogram(const std::vector<Sample>& samples,
                                         std::size_t num_classes);

}  // namespace dpfl

#endif  // DPFL_DATA_H_
