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

#ifndef DPFL_RUNNER_H_
#define DPFL_RUNNER_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "dpfl/diagnostics.h"
#include "dpfl/federation.h"
#include "dpfl/local_optimizer.h"
#include "dpfl/model.h"

namespace dpfl {

// Every knob of an experiment. The flat text form is one `key = value` per
// line with `#` comments; keys match the field names below. Defaults form
// the quadratic demo run.
struct RunConfig {
  OptimizerVariant variant = OptimizerVariant::kDpFedAdamW;
  ModelKind model = ModelKind::kQuadratic;
  std::size_t hidden_width = 16;

  std::string dataset = "client_quadratics";  // | gauss_classes | csv
  std::string csv_path;
  std::size_t num_features = 20;
  std::size_t num_classes = 10;
  std::size_t num_samples = 5000;
  double class_separation = 1.0;
  std::size_t dim = 10;
  std::size_t num_blocks = 2;
  double heterogeneity = 1.0;
  double sample_spread = 0.5;
  std::size_t samples_per_client = 100;

  std::size_t num_clients = 10;
  std::size_t clients_per_round = 0;  // 0: use participation
  double participation = 1.0;         // l; S = ceil(l N)
  std::size_t rounds = 50;
  std::size_t local_steps = 10;
  double sample_rate = 0.1;

  double clip_norm = 0.1;
  double noise_multiplier = 1.0;
  double delta = 1e-5;

  double lr = 1e-2;
  double weight_decay = 0.01;
  double gamma = 0.5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-3;

  double dirichlet_alpha = 0.1;
  std::uint64_t seed = 0;

  AggregationMode aggregation = AggregationMode::kBlockMeanV;
  bool bias_correction = true;
  bool strict_alg1 = true;
  bool identity_preconditioner = false;

  std::size_t hist_bins = 40;
  double hist_m_limit = 0.1;
  double hist_sqrt_v_limit = 0.1;

  // Execution only; excluded from the config hash.
  std::string output_dir = "dpfl_out";
  bool parallel = true;
  std::size_t threads = 0;  // 0: OpenMP default

  std::size_t effective_clients_per_round() const;
  void validate() const;

  // Sets one field from its text form. Throws ConfigError on unknown keys
  // or unparsable values.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  // All keys in schema order.
  static const std::vector<std::string>& keys();
  static bool is_semantic(const std::string& key);

  // `key = value` lines for every field, in schema order.
  std::string to_text() const;
  // 16 hex digits of FNV-1a over the semantic fields.
  std::string hash() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

struct RunSummary {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double final_acc = 0.0;
  double eps_rdp = 0.0;
  double eps_paper = 0.0;
  double eps_server = 0.0;
  double delta = 0.0;
  std::size_t rounds = 0;
  std::size_t dim = 0;
  std::size_t num_blocks = 0;
  std::string config_hash;
  double wall_time_s = 0.0;  // reported on stdout, not in summary.json
};

struct RunResult {
  RunSummary summary;
  std::vector<MetricRecord> records;
};

// Runs the experiment in memory.
RunResult simulate(const RunConfig& config);

// simulate() then writes metrics.csv, histograms.csv and summary.json into
// config.output_dir. The config is validated before anything is written.
RunSummary run(const RunConfig& config);

void write_summary_json(std::ostream& out, const RunConfig& config,
                        const RunSummary& summary);

// Ablation harness: arms must differ from each other only in `axes`.
struct ComparisonArm {
  std::string label;
  RunConfig config;
};

struct ComparisonRow {
  std::string label;
  std::uint64_t seed = 0;
  double final_loss = 0.0;
  double final_acc = 0.0;
  double eps_rdp = 0.0;
};

struct ComparisonStat {
  std::string label;
  std::size_t n = 0;
  double mean_loss = 0.0;
  double std_loss = 0.0;
  double mean_acc = 0.0;
  double std_acc = 0.0;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  std::vector<ComparisonStat> stats;
};

const std::set<std::string>& default_ablation_axes();

ComparisonTable compare(const std::vector<ComparisonArm>& arms,
                        const std::vector<std::uint64_t>& seeds,
                        const std::set<std::string>& axes =
                            default_ablation_axes());

// gamma in {0, 0.25, 0.5, 0.75, 1.0}.
std::vector<ComparisonArm> gamma_sweep_arms(const RunConfig& base);
// w/o Agg, w/o BC, w/o Align, full.
std::vector<ComparisonArm> component_ablation_arms(const RunConfig& base);

void write_comparison_rows(std::ostream& out, const ComparisonTable& table);
void write_comparison_stats(std::ostream& out, const ComparisonTable& table);

}  // namespace dpfl

#endif  // DPFL_RUNNER_H_
