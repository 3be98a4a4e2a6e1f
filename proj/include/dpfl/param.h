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

#ifndef DPFL_PARAM_H_
#define DPFL_PARAM_H_

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dpfl {

// Flat real-valued vector: parameters, gradients, moments and the alignment
// direction all share this representation.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(std::size_t dim, double fill = 0.0)
      : values_(dim, fill) {}
  explicit ParamVector(std::vector<double> values)
      : values_(std::move(values)) {}
  ParamVector(std::initializer_list<double> values) : values_(values) {}

  std::size_t dim() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> span() const { return values_; }
  std::span<double> span() { return values_; }
  const std::vector<double>& values() const { return values_; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool all_finite() const;

  bool operator==(const ParamVector&) const = default;

 private:
  std::vector<double> values_;
};

// Elementwise kernels. All require equal dimensions and throw ConfigError
// otherwise.
double l2_norm(std::span<const double> v);
inline double l2_norm(const ParamVector& v) { return l2_norm(v.span()); }
double dot(std::span<const double> a, std::span<const double> b);
// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
ParamVector operator+(const ParamVector& a, const ParamVector& b);
ParamVector operator-(const ParamVector& a, const ParamVector& b);
ParamVector operator*(double a, const ParamVector& v);
ParamVector hadamard(const ParamVector& a, const ParamVector& b);

void require_same_dim(std::size_t a, std::size_t b, const char* what);

// One contiguous half-open index range [begin, end) of a parameter vector.
struct Block {
  std::string name;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
};

// Partition of [0, d) into non-empty, disjoint, contiguous named blocks.
// Second-moment statistics are aggregated one value per block.
class BlockLayout {
 public:
  explicit BlockLayout(std::vector<Block> blocks);

  // Consecutive blocks of the given sizes, starting at index 0.
  static BlockLayout from_sizes(
      const std::vector<std::pair<std::string, std::size_t>>& sizes);
  // `num_blocks` nearly equal contiguous chunks; the first d % B get one
  // extra coordinate.
  static BlockLayout uniform(std::size_t dim, std::size_t num_blocks);
  // One block per coordinate (B = d). Used to express per-coordinate
  // aggregation of v with the same machinery.
  static BlockLayout singletons(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  const Block& operator[](std::size_t b) const { return blocks_[b]; }
  const std::vector<Block>& blocks() const { return blocks_; }

  bool operator==(const BlockLayout& other) const;

 private:
  std::vector<Block> blocks_;
  std::size_t dim_ = 0;
};

// One real number per block of a layout (block means of v).
class BlockStats {
 public:
  // Empty statistics with no layout (placeholder for "nothing sent").
  BlockStats() = default;
  BlockStats(std::shared_ptr<const BlockLayout> layout,
             std::vector<double> per_block);
  // All-zero statistics over `layout`.
  static BlockStats zeros(std::shared_ptr<const BlockLayout> layout);

  bool empty() const { return layout_ == nullptr; }
  const BlockLayout& layout() const { return *layout_; }
  const std::shared_ptr<const BlockLayout>& layout_ptr() const {
    return layout_;
  }
  std::size_t size() const { return per_block_.size(); }
  double operator[](std::size_t b) const { return per_block_[b]; }
  const std::vector<double>& values() const { return per_block_; }

 private:
  std::shared_ptr<const BlockLayout> layout_;
  std::vector<double> per_block_;
};

// Arithmetic mean of v within each block.
BlockStats block_mean(const ParamVector& v,
                      std::shared_ptr<const BlockLayout> layout);
// Expands per-block values back to a d-vector (each coordinate of block b
// gets stats[b]).
ParamVector broadcast_blocks(const BlockStats& stats);

}  // namespace dpfl

#endif  // DPFL_PARAM_H_
