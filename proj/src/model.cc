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

#include "dpfl/model.h"

#include <algorithm>
#include <cmath>

#include "dpfl/errors.h"
#include "dpfl/rng.h"

namespace dpfl {
namespace {

// Stable log(sum(exp(z))).
double log_sum_exp(const std::vector<double>& z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double x : z) s += std::exp(x - zmax);
  return zmax + std::log(s);
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kQuadratic:
      return "quadratic";
    case ModelKind::kLogistic:
      return "logistic";
    case ModelKind::kMlp2:
      return "mlp2";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "quadratic") return ModelKind::kQuadratic;
  if (name == "logistic") return ModelKind::kLogistic;
  if (name == "mlp2") return ModelKind::kMlp2;
  throw ConfigError("unknown model kind '" + name + "'");
}

Model::Model(ModelKind kind, std::shared_ptr<const BlockLayout> layout)
    : kind_(kind), layout_(std::move(layout)) {}

Model Model::quadratic(std::size_t dim, std::size_t num_blocks,
                       std::vector<double> curvature) {
  if (dim == 0) throw ConfigError("quadratic: dim must be > 0");
  if (curvature.empty()) curvature.assign(dim, 1.0);
  require_same_dim(curvature.size(), dim, "quadratic curvature");
  for (double c : curvature) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw ConfigError("quadratic: curvature entries must be positive");
    }
  }
  Model m(ModelKind::kQuadratic, std::make_shared<const BlockLayout>(
                                     BlockLayout::uniform(dim, num_blocks)));
  m.num_features_ = dim;
  m.curvature_ = std::move(curvature);
  return m;
}

Model Model::logistic(std::size_t num_features, std::size_t num_classes) {
  if (num_features == 0 || num_classes < 2) {
    throw ConfigError("logistic: need >= 1 feature and >= 2 classes");
  }
  Model m(ModelKind::kLogistic,
          std::make_shared<const BlockLayout>(BlockLayout::from_sizes(
              {{"weights", num_classes * num_features},
               {"bias", num_classes}})));
  m.num_features_ = num_features;
  m.num_classes_ = num_classes;
  return m;
}

Model Model::mlp2(std::size_t num_features, std::size_t hidden,
                  std::size_t num_classes) {
  if (num_features == 0 || hidden == 0 || num_classes < 2) {
    throw ConfigError("mlp2: need >= 1 feature, >= 1 hidden, >= 2 classes");
  }
  Model m(ModelKind::kMlp2,
          std::make_shared<const BlockLayout>(BlockLayout::from_sizes(
              {{"W1", hidden * num_features},
               {"b1", hidden},
               {"W2", num_classes * hidden},
               {"b2", num_classes}})));
  m.num_features_ = num_features;
  m.num_classes_ = num_classes;
  m.hidden_ = hidden;
  return m;
}

void Model::check(std::span<const double> theta, const Sample& sample) const {
  require_same_dim(theta.size(), dim(), "model parameters");
  require_same_dim(sample.features.size(), num_features_, "sample features");
  if (is_classifier() &&
      (sample.label < 0 ||
       static_cast<std::size_t>(sample.label) >= num_classes_)) {
    throw ConfigError("sample label out of range");
  }
}

void Model::logits(std::span<const double> theta, const Sample& sample,
                   std::vector<double>& out,
                   std::vector<double>* hidden_out) const {
  const auto& x = sample.features;
  const std::size_t p = num_features_;
  const std::size_t c = num_classes_;
  out.assign(c, 0.0);
  if (kind_ == ModelKind::kLogistic) {
    const double* w = theta.data();
    const double* b = theta.data() + c * p;
    for (std::size_t k = 0; k < c; ++k) {
      double z = b[k];
      for (std::size_t j = 0; j < p; ++j) z += w[k * p + j] * x[j];
      out[k] = z;
    }
    return;
  }
  const std::size_t h = hidden_;
  const double* w1 = theta.data();
  const double* b1 = w1 + h * p;
  const double* w2 = b1 + h;
  const double* b2 = w2 + c * h;
  std::vector<double> local;
  std::vector<double>& a = hidden_out ? *hidden_out : local;
  a.assign(h, 0.0);
  for (std::size_t u = 0; u < h; ++u) {
    double z = b1[u];
    for (std::size_t j = 0; j < p; ++j) z += w1[u * p + j] * x[j];
    a[u] = std::tanh(z);
  }
  for (std::size_t k = 0; k < c; ++k) {
    double z = b2[k];
    for (std::size_t u = 0; u < h; ++u) z += w2[k * h + u] * a[u];
    out[k] = z;
  }
}

double Model::loss(std::span<const double> theta, const Sample& sample) const {
  check(theta, sample);
  if (kind_ == ModelKind::kQuadratic) {
    double s = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double r = theta[i] - sample.features[i];
      s += curvature_[i] * r * r;
    }
    return 0.5 * s;
  }
  std::vector<double> z;
  logits(theta, sample, z, nullptr);
  return log_sum_exp(z) - z[static_cast<std::size_t>(sample.label)];
}

void Model::per_sample_grad(std::span<const double> theta, const Sample& sample,
                            std::span<double> grad) const {
  check(theta, sample);
  require_same_dim(grad.size(), dim(), "gradient buffer");
  if (kind_ == ModelKind::kQuadratic) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      grad[i] = curvature_[i] * (theta[i] - sample.features[i]);
    }
    return;
  }

  const auto& x = sample.features;
  const std::size_t p = num_features_;
  const std::size_t c = num_classes_;
  std::vector<double> z;
  std::vector<double> a;
  logits(theta, sample, z, kind_ == ModelKind::kMlp2 ? &a : nullptr);

  // dL/dz = softmax(z) - onehot(label)
  const double lse = log_sum_exp(z);
  std::vector<double> dz(c);
  for (std::size_t k = 0; k < c; ++k) dz[k] = std::exp(z[k] - lse);
  dz[static_cast<std::size_t>(sample.label)] -= 1.0;

  if (kind_ == ModelKind::kLogistic) {
    double* gw = grad.data();
    double* gb = grad.data() + c * p;
    for (std::size_t k = 0; k < c; ++k) {
      for (std::size_t j = 0; j < p; ++j) gw[k * p + j] = dz[k] * x[j];
      gb[k] = dz[k];
    }
    return;
  }

  const std::size_t h = hidden_;
  const double* w2 = theta.data() + h * p + h;
  double* gw1 = grad.data();
  double* gb1 = gw1 + h * p;
  double* gw2 = gb1 + h;
  double* gb2 = gw2 + c * h;
  for (std::size_t k = 0; k < c; ++k) {
    for (std::size_t u = 0; u < h; ++u) gw2[k * h + u] = dz[k] * a[u];
    gb2[k] = dz[k];
  }
  for (std::size_t u = 0; u < h; ++u) {
    double da = 0.0;
    for (std::size_t k = 0; k < c; ++k) da += w2[k * h + u] * dz[k];
    const double dpre = da * (1.0 - a[u] * a[u]);
    for (std::size_t j = 0; j < p; ++j) gw1[u * p + j] = dpre * x[j];
    gb1[u] = dpre;
  }
}

ParamVector Model::per_sample_grad(const ParamVector& theta,
                                   const Sample& sample) const {
  ParamVector g(dim());
  per_sample_grad(theta.span(), sample, g.span());
  return g;
}

int Model::predict(std::span<const double> theta, const Sample& sample) const {
  if (!is_classifier()) return -1;
  require_same_dim(theta.size(), dim(), "model parameters");
  require_same_dim(sample.features.size(), num_features_, "sample features");
  std::vector<double> z;
  logits(theta, sample, z, nullptr);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

ParamVector Model::init_params(std::uint64_t seed) const {
  Engine engine = make_engine(seed, StreamTag::kInit);
  std::uniform_real_distribution<double> uniform(-0.1, 0.1);
  ParamVector theta(dim());
  for (double& t : theta) t = uniform(engine);
  return theta;
}

}  // namespace dpfl
