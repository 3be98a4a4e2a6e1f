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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "dpfl/errors.h"

namespace dpfl {
namespace {

namespace fs = std::filesystem;

std::vector<Sample> indexed_samples(std::size_t n, std::size_t classes) {
  std::vector<Sample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].features = {static_cast<double>(i)};
    out[i].label = static_cast<int>(i % classes);
  }
  return out;
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

TEST(Dirichlet, ConservesSamplesAndIsDisjoint) {
  for (double alpha : {0.05, 0.1, 1.0, 100.0}) {
    const auto samples = indexed_samples(3000, 10);
    const auto fed = dirichlet_partition(samples, 20, 10, alpha, 7);
    ASSERT_EQ(fed.num_clients(), 20u);
    EXPECT_EQ(fed.total_samples(), samples.size());
    std::set<double> seen;
    for (const auto& client : fed.clients) {
      EXPECT_FALSE(client.empty());
      for (const auto& s : client) {
        EXPECT_TRUE(seen.insert(s.features[0]).second) << "duplicate sample";
        EXPECT_EQ(s.label, static_cast<int>(s.features[0]) % 10);
      }
    }
    EXPECT_EQ(seen.size(), samples.size());
  }
}

TEST(Dirichlet, LargeAlphaApproachesIid) {
  const auto samples = indexed_samples(20000, 10);
  const auto fed = dirichlet_partition(samples, 10, 10, 1e6, 3);
  for (const auto& client : fed.clients) {
    const auto h = class_histogram(client, 10);
    double tv = 0.0;
    for (std::size_t c = 0; c < 10; ++c) {
      tv += std::abs(static_cast<double>(h[c]) / client.size() - 0.1);
    }
    EXPECT_LT(0.5 * tv, 0.05);
  }
}

TEST(Dirichlet, SmallAlphaIsSkewed) {
  const auto samples = indexed_samples(20000, 10);
  const auto fed = dirichlet_partition(samples, 10, 10, 0.1, 3);
  double mean_tv = 0.0;
  for (const auto& client : fed.clients) {
    const auto h = class_histogram(client, 10);
    double tv = 0.0;
    for (std::size_t c = 0; c < 10; ++c) {
      tv += std::abs(static_cast<double>(h[c]) / client.size() - 0.1);
    }
    mean_tv += 0.5 * tv / 10.0;
  }
  EXPECT_GT(mean_tv, 0.3);
}

TEST(Dirichlet, DeterministicPerSeed) {
  const auto samples = indexed_samples(1000, 5);
  const auto a = dirichlet_partition(samples, 8, 5, 0.5, 11);
  const auto b = dirichlet_partition(samples, 8, 5, 0.5, 11);
  const auto c = dirichlet_partition(samples, 8, 5, 0.5, 12);
  bool differs = false;
  for (std::size_t i = 0; i < 8; ++i) {
    ASSERT_EQ(a.clients[i].size(), b.clients[i].size());
    for (std::size_t j = 0; j < a.clients[i].size(); ++j) {
      EXPECT_EQ(a.clients[i][j].features, b.clients[i][j].features);
    }
    differs |= a.clients[i].size() != c.clients[i].size();
  }
  EXPECT_TRUE(differs);
}

TEST(Dirichlet, FailsWhenEmptyClientsAreUnavoidable) {
  const auto samples = indexed_samples(100, 10);
  EXPECT_THROW(dirichlet_partition(samples, 50, 10, 1e-3, 0), ConfigError);
}

TEST(Dirichlet, RejectsBadArguments) {
  const auto samples = indexed_samples(100, 2);
  EXPECT_THROW(dirichlet_partition(samples, 1, 2, 1.0, 0), ConfigError);
  EXPECT_THROW(dirichlet_partition(samples, 4, 2, 0.0, 0), ConfigError);
  EXPECT_THROW(dirichlet_partition(samples, 4, 1, 1.0, 0), ConfigError);
  EXPECT_THROW(dirichlet_partition(indexed_samples(3, 2), 4, 2, 1.0, 0),
               ConfigError);
}

TEST(GaussClasses, ShapeAndBalance) {
  const auto s = make_gauss_classes(1000, 6, 4, 3.0, 1);
  ASSERT_EQ(s.size(), 1000u);
  const auto h = class_histogram(s, 4);
  for (auto n : h) EXPECT_EQ(n, 250u);
  for (const auto& x : s) EXPECT_EQ(x.features.size(), 6u);
  const auto again = make_gauss_classes(1000, 6, 4, 3.0, 1);
  EXPECT_EQ(s[17].features, again[17].features);
  EXPECT_THROW(make_gauss_classes(10, 6, 1, 3.0, 1), ConfigError);
}

TEST(ClientQuadratics, ZeroHeterogeneityGivesIdenticalCenters) {
  const auto centers = make_client_quadratics(5, 6, 0.0, 4);
  for (const auto& a : centers) {
    for (double x : a) EXPECT_EQ(x, 0.0);
  }
  EXPECT_EQ(center_dissimilarity(centers), 0.0);
}

TEST(ClientQuadratics, DissimilarityScalesWithHeterogeneity) {
  const auto one = make_client_quadratics(50, 40, 1.0, 4);
  const auto two = make_client_quadratics(50, 40, 2.0, 4);
  EXPECT_NEAR(center_dissimilarity(two), 2.0 * center_dissimilarity(one),
              1e-12);
  EXPECT_NEAR(center_dissimilarity(one), std::sqrt(50.0 * 39.0 / 40.0), 1.0);
}

TEST(ClientQuadratics, DataSpreadAroundCenters) {
  const auto centers = make_client_quadratics(3, 4, 1.0, 9);
  const auto fed = quadratic_client_data(centers, 4000, 0.5, 9);
  ASSERT_EQ(fed.num_clients(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    ASSERT_EQ(fed.clients[i].size(), 4000u);
    for (std::size_t j = 0; j < 3; ++j) {
      double mean = 0.0;
      for (const auto& s : fed.clients[i]) mean += s.features[j];
      mean /= 4000.0;
      EXPECT_NEAR(mean, centers[i][j], 5.0 * 0.5 / std::sqrt(4000.0));
    }
  }
  EXPECT_THROW(quadratic_client_data(centers, 0, 0.5, 9), ConfigError);
}

TEST(LoadCsv, ReadsHeaderFeaturesAndLabel) {
  const auto p = write_temp("dpfl_data_test_ok.csv",
                            "f1,f2,label\n1.5,-2,0\n3,4e-1,2\r\n\n");
  const auto s = load_csv(p.string());
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].features, (std::vector<double>{1.5, -2.0}));
  EXPECT_EQ(s[0].label, 0);
  EXPECT_EQ(s[1].features, (std::vector<double>{3.0, 0.4}));
  EXPECT_EQ(s[1].label, 2);
  fs::remove(p);
}

TEST(LoadCsv, RejectsMalformedInput) {
  EXPECT_THROW(load_csv("/nonexistent/dpfl.csv"), ConfigError);
  const std::pair<const char*, const char*> cases[] = {
      {"dpfl_bad_cols.csv", "f1,label\n1,2,3\n"},
      {"dpfl_bad_cell.csv", "f1,label\nx,1\n"},
      {"dpfl_bad_label.csv", "f1,label\n1,0.5\n"},
      {"dpfl_neg_label.csv", "f1,label\n1,-1\n"},
      {"dpfl_no_rows.csv", "f1,label\n"},
      {"dpfl_one_col.csv", "label\n1\n"},
  };
  for (const auto& [name, text] : cases) {
    const auto p = write_temp(name, text);
    EXPECT_THROW(load_csv(p.string()), ConfigError) << name;
    fs::remove(p);
  }
}

}  // namespace
}  // namespace dpfl
