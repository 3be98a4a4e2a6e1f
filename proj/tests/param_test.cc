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

#include "dpfl/param.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <memory>
#include <random>

#include "dpfl/errors.h"

namespace dpfl {
namespace {

std::shared_ptr<const BlockLayout> two_by_two() {
  return std::make_shared<const BlockLayout>(
      BlockLayout::from_sizes({{"A", 2}, {"B", 2}}));
}

TEST(L2Norm, Basics) {
  EXPECT_EQ(l2_norm(ParamVector{3.0, 4.0}), 5.0);
  EXPECT_EQ(l2_norm(ParamVector(7)), 0.0);
  EXPECT_EQ(l2_norm(ParamVector{-2.5}), 2.5);
}

TEST(L2Norm, NoOverflowOrUnderflow) {
  EXPECT_DOUBLE_EQ(l2_norm(ParamVector{3e200, 4e200}), 5e200);
  EXPECT_DOUBLE_EQ(l2_norm(ParamVector{3e-200, 4e-200}), 5e-200);
}

TEST(L2Norm, AbsoluteHomogeneity) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    ParamVector v(1 + trial % 17);
    for (double& x : v) x = normal(rng);
    const double a = 10.0 * normal(rng);
    const double lhs = l2_norm(a * v);
    const double rhs = std::abs(a) * l2_norm(v);
    EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
  }
}

TEST(ParamVectorOps, ArithmeticAndMismatch) {
  const ParamVector a{1.0, 2.0};
  const ParamVector b{3.0, -1.0};
  EXPECT_EQ(a + b, (ParamVector{4.0, 1.0}));
  EXPECT_EQ(a - b, (ParamVector{-2.0, 3.0}));
  EXPECT_EQ(2.0 * a, (ParamVector{2.0, 4.0}));
  EXPECT_EQ(hadamard(a, b), (ParamVector{3.0, -2.0}));
  EXPECT_EQ(dot(a.span(), b.span()), 1.0);
  ParamVector y{1.0, 1.0};
  axpy(0.5, a.span(), y.span());
  EXPECT_EQ(y, (ParamVector{1.5, 2.0}));
  EXPECT_THROW(a + ParamVector(3), ConfigError);
  EXPECT_THROW(dot(a.span(), ParamVector(1).span()), ConfigError);
}

TEST(BlockLayout, RejectsGapsOverlapsAndEmptyBlocks) {
  EXPECT_THROW(BlockLayout({}), ConfigError);
  EXPECT_THROW(BlockLayout({{"a", 0, 2}, {"b", 3, 4}}), ConfigError);
  EXPECT_THROW(BlockLayout({{"a", 0, 2}, {"b", 1, 4}}), ConfigError);
  EXPECT_THROW(BlockLayout({{"a", 0, 0}}), ConfigError);
  EXPECT_THROW(BlockLayout({{"a", 1, 3}}), ConfigError);
  EXPECT_NO_THROW(BlockLayout({{"b", 2, 4}, {"a", 0, 2}}));
}

TEST(BlockLayout, UniformSplitsRemainderToFront) {
  const BlockLayout l = BlockLayout::uniform(10, 3);
  ASSERT_EQ(l.num_blocks(), 3u);
  EXPECT_EQ(l[0].size(), 4u);
  EXPECT_EQ(l[1].size(), 3u);
  EXPECT_EQ(l[2].size(), 3u);
  EXPECT_EQ(l.dim(), 10u);
  EXPECT_THROW(BlockLayout::uniform(3, 4), ConfigError);
  EXPECT_THROW(BlockLayout::uniform(3, 0), ConfigError);
  EXPECT_EQ(BlockLayout::singletons(5).num_blocks(), 5u);
}

TEST(BlockMean, HandExamples) {
  const auto layout = two_by_two();
  const BlockStats s = block_mean(ParamVector{1.0, 2.0, 3.0, 4.0}, layout);
  EXPECT_EQ(s.values(), (std::vector<double>{1.5, 3.5}));
  EXPECT_EQ(broadcast_blocks(s), (ParamVector{1.5, 1.5, 3.5, 3.5}));
  EXPECT_EQ(block_mean(ParamVector(4), layout).values(),
            (std::vector<double>{0.0, 0.0}));
  const BlockStats c = block_mean(ParamVector(4, 0.7), layout);
  EXPECT_EQ(c.values(), (std::vector<double>{0.7, 0.7}));
  EXPECT_THROW(block_mean(ParamVector(3), layout), ConfigError);
}

TEST(BlockMean, SingleBlockBroadcastsConstant) {
  auto one = std::make_shared<const BlockLayout>(BlockLayout::uniform(6, 1));
  const BlockStats s(one, {2.25});
  EXPECT_EQ(broadcast_blocks(s), ParamVector(6, 2.25));
}

TEST(BlockMean, BroadcastPreservesBlockSums) {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> expo(2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 5 + trial % 40;
    const std::size_t b = 1 + trial % 5;
    auto layout =
        std::make_shared<const BlockLayout>(BlockLayout::uniform(d, b));
    ParamVector v(d);
    for (double& x : v) x = expo(rng);
    const ParamVector back = broadcast_blocks(block_mean(v, layout));
    for (const Block& blk : layout->blocks()) {
      double s1 = 0.0;
      double s2 = 0.0;
      for (std::size_t i = blk.begin; i < blk.end; ++i) {
        s1 += v[i];
        s2 += back[i];
      }
      EXPECT_NEAR(s1, s2, 1e-12 * s1);
    }
  }
}

TEST(BlockMean, InvariantUnderWithinBlockPermutation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  auto layout = std::make_shared<const BlockLayout>(
      BlockLayout::from_sizes({{"a", 7}, {"b", 5}, {"c", 9}}));
  ParamVector v(21);
  for (double& x : v) x = u(rng);
  const BlockStats ref = block_mean(v, layout);
  for (int trial = 0; trial < 50; ++trial) {
    ParamVector w = v;
    for (const Block& blk : layout->blocks()) {
      std::shuffle(w.begin() + static_cast<std::ptrdiff_t>(blk.begin),
                   w.begin() + static_cast<std::ptrdiff_t>(blk.end), rng);
    }
    const BlockStats got = block_mean(w, layout);
    for (std::size_t b = 0; b < ref.size(); ++b) {
      EXPECT_NEAR(got[b], ref[b], 1e-15 * ref[b]);
    }
  }
}

TEST(BlockStats, SizeMustMatchLayout) {
  EXPECT_THROW(BlockStats(two_by_two(), {1.0}), ConfigError);
  EXPECT_THROW(BlockStats(nullptr, {}), ConfigError);
  EXPECT_TRUE(BlockStats().empty());
}

}  // namespace
}  // namespace dpfl
