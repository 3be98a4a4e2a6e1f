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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dpfl/errors.h"

namespace dpfl {

bool ParamVector::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double x) { return std::isfinite(x); });
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ConfigError(msg.str());
  }
}

double l2_norm(std::span<const double> v) {
  // Scaled accumulation so tiny or huge entries neither underflow nor
  // overflow the sum of squares.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double sum = 0.0;
  for (double x : v) {
    const double r = x / scale;
    sum += r * r;
  }
  return scale * std::sqrt(sum);
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  require_same_dim(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

ParamVector operator+(const ParamVector& a, const ParamVector& b) {
  require_same_dim(a.dim(), b.dim(), "add");
  ParamVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return out;
}

ParamVector operator-(const ParamVector& a, const ParamVector& b) {
  require_same_dim(a.dim(), b.dim(), "subtract");
  ParamVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
  return out;
}

ParamVector operator*(double a, const ParamVector& v) {
  ParamVector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = a * v[i];
  return out;
}

ParamVector hadamard(const ParamVector& a, const ParamVector& b) {
  require_same_dim(a.dim(), b.dim(), "hadamard");
  ParamVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] * b[i];
  return out;
}

BlockLayout::BlockLayout(std::vector<Block> blocks)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ConfigError("BlockLayout: no blocks");
  std::vector<const Block*> sorted;
  sorted.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    if (b.end <= b.begin) {
      throw ConfigError("BlockLayout: block '" + b.name + "' is empty");
    }
    sorted.push_back(&b);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const Block* x, const Block* y) { return x->begin < y->begin; });
  std::size_t next = 0;
  for (const Block* b : sorted) {
    if (b->begin != next) {
      throw ConfigError("BlockLayout: blocks must tile [0, d) without gaps "
                        "or overlaps (at block '" + b->name + "')");
    }
    next = b->end;
  }
  dim_ = next;
}

BlockLayout BlockLayout::from_sizes(
    const std::vector<std::pair<std::string, std::size_t>>& sizes) {
  std::vector<Block> blocks;
  std::size_t offset = 0;
  for (const auto& [name, size] : sizes) {
    blocks.push_back({name, offset, offset + size});
    offset += size;
  }
  return BlockLayout(std::move(blocks));
}

BlockLayout BlockLayout::uniform(std::size_t dim, std::size_t num_blocks) {
  if (num_blocks == 0 || num_blocks > dim) {
    throw ConfigError("BlockLayout::uniform: need 1 <= B <= d");
  }
  std::vector<Block> blocks;
  const std::size_t base = dim / num_blocks;
  const std::size_t extra = dim % num_blocks;
  std::size_t offset = 0;
  for (std::size_t b = 0; b < num_blocks; ++b) {
    const std::size_t size = base + (b < extra ? 1 : 0);
    blocks.push_back({"block" + std::to_string(b), offset, offset + size});
    offset += size;
  }
  return BlockLayout(std::move(blocks));
}

BlockLayout BlockLayout::singletons(std::size_t dim) {
  if (dim == 0) throw ConfigError("BlockLayout::singletons: d must be > 0");
  std::vector<Block> blocks(dim);
  for (std::size_t i = 0; i < dim; ++i) blocks[i] = {"", i, i + 1};
  return BlockLayout(std::move(blocks));
}

bool BlockLayout::operator==(const BlockLayout& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].begin != other.blocks_[b].begin ||
        blocks_[b].end != other.blocks_[b].end) {
      return false;
    }
  }
  return true;
}

BlockStats::BlockStats(std::shared_ptr<const BlockLayout> layout,
                       std::vector<double> per_block)
    : layout_(std::move(layout)), per_block_(std::move(per_block)) {
  if (!layout_) throw ConfigError("BlockStats: null layout");
  require_same_dim(per_block_.size(), layout_->num_blocks(), "BlockStats");
}

BlockStats BlockStats::zeros(std::shared_ptr<const BlockLayout> layout) {
  const std::size_t n = layout->num_blocks();
  return BlockStats(std::move(layout), std::vector<double>(n, 0.0));
}

BlockStats block_mean(const ParamVector& v,
                      std::shared_ptr<const BlockLayout> layout) {
  require_same_dim(v.dim(), layout->dim(), "block_mean");
  std::vector<double> means(layout->num_blocks());
  for (std::size_t b = 0; b < layout->num_blocks(); ++b) {
    const Block& block = (*layout)[b];
    double sum = 0.0;
    for (std::size_t i = block.begin; i < block.end; ++i) sum += v[i];
    means[b] = sum / static_cast<double>(block.size());
  }
  return BlockStats(std::move(layout), std::move(means));
}

ParamVector broadcast_blocks(const BlockStats& stats) {
  const BlockLayout& layout = stats.layout();
  ParamVector out(layout.dim());
  for (std::size_t b = 0; b < layout.num_blocks(); ++b) {
    const Block& block = layout[b];
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(block.begin),
              out.begin() + static_cast<std::ptrdiff_t>(block.end), stats[b]);
  }
  return out;
}

}  // namespace dpfl
