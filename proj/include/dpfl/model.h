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

#ifndef DPFL_MODEL_H_
#define DPFL_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dpfl/param.h"

namespace dpfl {

// One training example. For the quadratic model `features` holds the
// sample's center point and `label` is unused.
struct Sample {
  std::vector<double> features;
  int label = 0;
};

enum class ModelKind { kQuadratic, kLogistic, kMlp2 };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

// Desk-scale differentiable models with exact per-sample gradients.
//
//   quadratic: 0.5 * (theta - x)^T D (theta - x), D diagonal.
//   logistic:  softmax regression, blocks {weights, bias}.
//   mlp2:      x -> tanh(W1 x + b1) -> W2 h + b2 -> softmax,
//              blocks {W1, b1, W2, b2}.
//
// Weight matrices are stored row-major (one row per output unit).
class Model {
 public:
  // `curvature` is the diagonal of D; empty means identity.
  static Model quadratic(std::size_t dim, std::size_t num_blocks = 1,
                         std::vector<double> curvature = {});
  static Model logistic(std::size_t num_features, std::size_t num_classes);
  static Model mlp2(std::size_t num_features, std::size_t hidden,
                    std::size_t num_classes);

  ModelKind kind() const { return kind_; }
  std::size_t dim() const { return layout_->dim(); }
  std::size_t num_features() const { return num_features_; }
  std::size_t num_classes() const { return num_classes_; }
  std::size_t hidden() const { return hidden_; }
  bool is_classifier() const { return kind_ != ModelKind::kQuadratic; }
  const BlockLayout& layout() const { return *layout_; }
  const std::shared_ptr<const BlockLayout>& layout_ptr() const {
    return layout_;
  }
  const std::vector<double>& curvature() const { return curvature_; }

  double loss(std::span<const double> theta, const Sample& sample) const;
  double loss(const ParamVector& theta, const Sample& sample) const {
    return loss(theta.span(), sample);
  }

  // Overwrites `grad` with the gradient of loss() at theta.
  void per_sample_grad(std::span<const double> theta, const Sample& sample,
                       std::span<double> grad) const;
  ParamVector per_sample_grad(const ParamVector& theta,
                              const Sample& sample) const;

  // Arg-max class; -1 for the quadratic model.
  int predict(std::span<const double> theta, const Sample& sample) const;

  // Entries i.i.d. uniform in [-0.1, 0.1].
  ParamVector init_params(std::uint64_t seed) const;

 private:
  Model(ModelKind kind, std::shared_ptr<const BlockLayout> layout);

  void check(std::span<const double> theta, const Sample& sample) const;
  // Writes class logits for classifiers; `hidden_out` receives tanh
  // activations for mlp2.
  void logits(std::span<const double> theta, const Sample& sample,
              std::vector<double>& out, std::vector<double>* hidden_out) const;

  ModelKind kind_;
  std::shared_ptr<const BlockLayout> layout_;
  std::size_t num_features_ = 0;
  std::size_t num_classes_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> curvature_;
};

}  // namespace dpfl

#endif  // DPFL_MODEL_H_
