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

#include "dpfl/runner.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "dpfl/accountant.h"
#include "dpfl/data.h"
#include "dpfl/errors.h"
#include "json.hpp"

namespace dpfl {
namespace {

using Getter = std::function<std::string(const RunConfig&)>;
using Setter = std::function<void(RunConfig&, const std::string&)>;

struct Field {
  std::string key;
  bool semantic;
  Getter get;
  Setter set;
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::size_t parse_size(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  if (used != v.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return static_cast<std::size_t>(x);
}

double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  if (used != v.size()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

#define DPFL_SIZE_FIELD(name, semantic)                                  \
  Field {                                                               \
    #name, semantic,                                                    \
        [](const RunConfig& c) { return std::to_string(c.name); },      \
        [](RunConfig& c, const std::string& v) {                        \
          c.name = parse_size(#name, v);                                \
        }                                                               \
  }
#define DPFL_REAL_FIELD(name)                                           \
  Field {                                                               \
    #name, true, [](const RunConfig& c) { return format_real(c.name); }, \
        [](RunConfig& c, const std::string& v) {                        \
          c.name = parse_real(#name, v);                                \
        }                                                               \
  }
#define DPFL_BOOL_FIELD(name, semantic)                                  \
  Field {                                                               \
    #name, semantic,                                                    \
        [](const RunConfig& c) { return std::string(c.name ? "true" : "false"); }, \
        [](RunConfig& c, const std::string& v) {                        \
          c.name = parse_bool(#name, v);                                \
        }                                                               \
  }
#define DPFL_STRING_FIELD(name, semantic)                                \
  Field {                                                               \
    #name, semantic, [](const RunConfig& c) { return c.name; },         \
        [](RunConfig& c, const std::string& v) { c.name = v; }          \
  }

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = {
      Field{"variant", true,
            [](const RunConfig& c) { return to_string(c.variant); },
            [](RunConfig& c, const std::string& v) {
              c.variant = parse_variant(v);
            }},
      Field{"model", true,
            [](const RunConfig& c) { return to_string(c.model); },
            [](RunConfig& c, const std::string& v) {
              c.model = parse_model_kind(v);
            }},
      DPFL_SIZE_FIELD(hidden_width, true),
      DPFL_STRING_FIELD(dataset, true),
      DPFL_STRING_FIELD(csv_path, true),
      DPFL_SIZE_FIELD(num_features, true),
      DPFL_SIZE_FIELD(num_classes, true),
      DPFL_SIZE_FIELD(num_samples, true),
      DPFL_REAL_FIELD(class_separation),
      DPFL_SIZE_FIELD(dim, true),
      DPFL_SIZE_FIELD(num_blocks, true),
      DPFL_REAL_FIELD(heterogeneity),
      DPFL_REAL_FIELD(sample_spread),
      DPFL_SIZE_FIELD(samples_per_client, true),
      DPFL_SIZE_FIELD(num_clients, true),
      DPFL_SIZE_FIELD(clients_per_round, true),
      DPFL_REAL_FIELD(participation),
      DPFL_SIZE_FIELD(rounds, true),
      DPFL_SIZE_FIELD(local_steps, true),
      DPFL_REAL_FIELD(sample_rate),
      DPFL_REAL_FIELD(clip_norm),
      DPFL_REAL_FIELD(noise_multiplier),
      DPFL_REAL_FIELD(delta),
      DPFL_REAL_FIELD(lr),
      DPFL_REAL_FIELD(weight_decay),
      DPFL_REAL_FIELD(gamma),
      DPFL_REAL_FIELD(beta1),
      DPFL_REAL_FIELD(beta2),
      DPFL_REAL_FIELD(eps_adam),
      DPFL_REAL_FIELD(dirichlet_alpha),
      Field{"seed", true,
            [](const RunConfig& c) { return std::to_string(c.seed); },
            [](RunConfig& c, const std::string& v) {
              c.seed = static_cast<std::uint64_t>(parse_size("seed", v));
            }},
      Field{"aggregation", true,
            [](const RunConfig& c) { return to_string(c.aggregation); },
            [](RunConfig& c, const std::string& v) {
              c.aggregation = parse_aggregation(v);
            }},
      DPFL_BOOL_FIELD(bias_correction, true),
      DPFL_BOOL_FIELD(strict_alg1, true),
      DPFL_BOOL_FIELD(identity_preconditioner, true),
      DPFL_SIZE_FIELD(hist_bins, true),
      DPFL_REAL_FIELD(hist_m_limit),
      DPFL_REAL_FIELD(hist_sqrt_v_limit),
      DPFL_STRING_FIELD(output_dir, false),
      DPFL_BOOL_FIELD(parallel, false),
      DPFL_SIZE_FIELD(threads, false),
  };
  return fields;
}

#undef DPFL_SIZE_FIELD
#undef DPFL_REAL_FIELD
#undef DPFL_BOOL_FIELD
#undef DPFL_STRING_FIELD

const Field& find_field(const std::string& key) {
  for (const Field& f : schema()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Experiment {
  FederatedDataset data;
  Model model;
};

Experiment build_experiment(const RunConfig& cfg) {
  if (cfg.dataset == "client_quadratics") {
    const auto centers = make_client_quadratics(cfg.dim, cfg.num_clients,
                                                cfg.heterogeneity, cfg.seed);
    return {quadratic_client_data(centers, cfg.samples_per_client,
                                  cfg.sample_spread, cfg.seed),
            Model::quadratic(cfg.dim, cfg.num_blocks)};
  }
  std::vector<Sample> samples;
  std::size_t num_features = cfg.num_features;
  std::size_t num_classes = cfg.num_classes;
  if (cfg.dataset == "gauss_classes") {
    samples = make_gauss_classes(cfg.num_samples, cfg.num_features,
                                 cfg.num_classes, cfg.class_separation,
                                 cfg.seed);
  } else {
    samples = load_csv(cfg.csv_path);
    num_features = samples.front().features.size();
    int max_label = 0;
    for (const auto& s : samples) max_label = std::max(max_label, s.label);
    num_classes = std::max<std::size_t>(2, static_cast<std::size_t>(max_label) + 1);
  }
  FederatedDataset data = dirichlet_partition(
      samples, cfg.num_clients, num_classes, cfg.dirichlet_alpha, cfg.seed);
  Model model = cfg.model == ModelKind::kLogistic
                    ? Model::logistic(num_features, num_classes)
                    : Model::mlp2(num_features, cfg.hidden_width, num_classes);
  return {std::move(data), std::move(model)};
}

FederationConfig federation_config(const RunConfig& cfg) {
  FederationConfig fc;
  fc.variant = cfg.variant;
  fc.hyper.beta1 = cfg.beta1;
  fc.hyper.beta2 = cfg.beta2;
  fc.hyper.eps = cfg.eps_adam;
  fc.hyper.lr = cfg.lr;
  fc.hyper.weight_decay = cfg.weight_decay;
  fc.hyper.gamma = cfg.gamma;
  fc.local.bias_correction = cfg.bias_correction;
  fc.local.strict_alg1 = cfg.strict_alg1;
  fc.local.identity_preconditioner = cfg.identity_preconditioner;
  fc.aggregation = cfg.aggregation;
  fc.clients_per_round = cfg.effective_clients_per_round();
  fc.local_steps = cfg.local_steps;
  fc.sample_rate = cfg.sample_rate;
  fc.clip_norm = cfg.clip_norm;
  fc.noise_multiplier = cfg.noise_multiplier;
  fc.seed = cfg.seed;
  fc.policy = cfg.parallel ? ExecutionPolicy::kParallel : ExecutionPolicy::kSerial;
  return fc;
}

ParamVector mean_of(const std::vector<ClientReport>& reports,
                    ParamVector ClientReport::*member, std::size_t d) {
  ParamVector mean(d);
  std::size_t n = 0;
  for (const auto& r : reports) {
    const ParamVector& x = r.*member;
    if (x.dim() != d) continue;
    axpy(1.0, x.span(), mean.span());
    ++n;
  }
  if (n > 0) {
    for (double& x : mean) x /= static_cast<double>(n);
  }
  return mean;
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::size_t RunConfig::effective_clients_per_round() const {
  if (clients_per_round > 0) return clients_per_round;
  return static_cast<std::size_t>(
      std::ceil(participation * static_cast<double>(num_clients) - 1e-9));
}

void RunConfig::validate() const {
  const bool quad = dataset == "client_quadratics";
  if (!quad && dataset != "gauss_classes" && dataset != "csv") {
    throw ConfigError("dataset must be client_quadratics, gauss_classes or csv");
  }
  if (quad != (model == ModelKind::kQuadratic)) {
    throw ConfigError("model 'quadratic' pairs with dataset "
                      "'client_quadratics' and classifiers with "
                      "gauss_classes/csv");
  }
  if (dataset == "csv" && csv_path.empty()) {
    throw ConfigError("dataset = csv needs csv_path");
  }
  if (quad) {
    if (dim == 0) throw ConfigError("dim must be > 0");
    if (num_blocks < 1 || num_blocks > dim) {
      throw ConfigError("num_blocks must satisfy 1 <= B <= dim");
    }
    if (samples_per_client == 0) throw ConfigError("samples_per_client must be > 0");
    if (!(heterogeneity >= 0.0) || !(sample_spread >= 0.0)) {
      throw ConfigError("heterogeneity and sample_spread must be >= 0");
    }
    if (num_clients < 1) throw ConfigError("num_clients must be >= 1");
  } else {
    if (num_clients < 2) throw ConfigError("num_clients must be >= 2");
    if (!(dirichlet_alpha > 0.0) || !std::isfinite(dirichlet_alpha)) {
      throw ConfigError("dirichlet_alpha must be finite and > 0");
    }
    if (model == ModelKind::kMlp2 && hidden_width == 0) {
      throw ConfigError("hidden_width must be > 0");
    }
    if (dataset == "gauss_classes") {
      if (num_features == 0 || num_classes < 2) {
        throw ConfigError("gauss_classes needs num_features >= 1 and "
                          "num_classes >= 2");
      }
      if (num_samples < num_clients || num_samples < num_classes) {
        throw ConfigError("num_samples too small for the client/class count");
      }
    }
  }
  if (clients_per_round == 0 &&
      !(participation > 0.0 && participation <= 1.0)) {
    throw ConfigError("participation must lie in (0, 1]");
  }
  const std::size_t s = effective_clients_per_round();
  if (s < 1 || s > num_clients) {
    throw ConfigError("clients_per_round must satisfy 1 <= S <= num_clients");
  }
  if (local_steps < 1) throw ConfigError("local_steps must be >= 1");
  if (!(sample_rate > 0.0 && sample_rate <= 1.0)) {
    throw ConfigError("sample_rate must lie in (0, 1]");
  }
  if (!(clip_norm > 0.0) || !std::isfinite(clip_norm)) {
    throw ConfigError("clip_norm must be finite and > 0");
  }
  if (!(noise_multiplier >= 0.0) || !std::isfinite(noise_multiplier)) {
    throw ConfigError("noise_multiplier must be finite and >= 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  AdamWHyper h{beta1, beta2, eps_adam, lr, weight_decay, gamma};
  h.validate();
  if (hist_bins < 1) throw ConfigError("hist_bins must be >= 1");
  if (!(hist_m_limit > 0.0) || !(hist_sqrt_v_limit > 0.0)) {
    throw ConfigError("histogram limits must be > 0");
  }
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

void RunConfig::set(const std::string& key, const std::string& value) {
  find_field(key).set(*this, value);
}

std::string RunConfig::get(const std::string& key) const {
  return find_field(key).get(*this);
}

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const Field& f : schema()) out.push_back(f.key);
    return out;
  }();
  return names;
}

bool RunConfig::is_semantic(const std::string& key) {
  return find_field(key).semantic;
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const Field& f : schema()) out += f.key + " = " + f.get(*this) + "\n";
  return out;
}

std::string RunConfig::hash() const {
  std::string canonical;
  for (const Field& f : schema()) {
    if (f.semantic) canonical += f.key + "=" + f.get(*this) + "\n";
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(canonical)));
  return buf;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    }
    try {
      cfg.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " +
                        e.what());
    }
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

RunResult simulate(const RunConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  Experiment exp = build_experiment(cfg);
  const Model& model = exp.model;
  const FederatedDataset& data = exp.data;
  const FederationConfig fc = federation_config(cfg);
  fc.validate(data.num_clients());
  const std::size_t d = model.dim();

  RoundState state = RoundState::initial(
      model.init_params(cfg.seed),
      aggregation_layout(model, fc.effective_aggregation()));

  RunResult result;
  RunSummary& summary = result.summary;
  const Evaluation initial = evaluate(model, state.theta, data, fc.policy);
  summary.initial_loss = initial.loss;
  summary.final_loss = initial.loss;
  summary.final_acc = initial.accuracy;
  summary.delta = cfg.delta;
  summary.dim = d;
  summary.num_blocks = model.layout().num_blocks();
  summary.config_hash = cfg.hash();

  PrivacyLedger ledger;
  const bool private_run = cfg.noise_multiplier > 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t round = 0; round < cfg.rounds; ++round) {
    RoundResult rr = run_round(state, model, data, fc);
    state = std::move(rr.next);
    const Evaluation ev = evaluate(model, state.theta, data, fc.policy);

    MetricRecord rec;
    rec.t = state.t;
    rec.global_loss = ev.loss;
    rec.global_acc = ev.accuracy;
    rec.uplink = rr.payload.uplink;
    rec.downlink = rr.payload.downlink;

    std::vector<ParamVector> vs;
    std::vector<ParamVector> endpoints;
    for (const auto& r : rr.reports) {
      if (r.v.dim() == d) vs.push_back(r.v);
      endpoints.push_back(r.endpoint);
    }
    rec.var_v = vs.size() >= 2 ? cross_client_var_v(vs) : nan;
    rec.drift = endpoints.size() >= 2 ? client_drift(endpoints) : nan;

    if (private_run) {
      ledger.record(cfg.noise_multiplier, cfg.sample_rate, cfg.local_steps);
      rec.eps_rdp = compose_and_convert(ledger, cfg.delta).epsilon;
    } else {
      rec.eps_rdp = inf;
    }
    rec.eps_paper = third_party_epsilon(
        cfg.sample_rate, static_cast<double>(state.t),
        static_cast<double>(cfg.local_steps), cfg.delta, cfg.noise_multiplier);

    const ParamVector m_mean = mean_of(rr.reports, &ClientReport::m, d);
    const ParamVector sv_mean = mean_of(rr.reports, &ClientReport::sqrt_v_hat, d);
    rec.hist_m = Histogram::build(m_mean.span(), -cfg.hist_m_limit,
                                  cfg.hist_m_limit, cfg.hist_bins);
    rec.hist_sqrt_v = Histogram::build(sv_mean.span(), 0.0,
                                       cfg.hist_sqrt_v_limit, cfg.hist_bins);
    result.records.push_back(std::move(rec));
  }

  if (!result.records.empty()) {
    const MetricRecord& last = result.records.back();
    summary.final_loss = last.global_loss;
    summary.final_acc = last.global_acc;
    summary.eps_rdp = last.eps_rdp;
    summary.eps_paper = last.eps_paper;
  } else {
    summary.eps_rdp = 0.0;
    summary.eps_paper = 0.0;
  }
  summary.rounds = cfg.rounds;
  const double participation_rate =
      static_cast<double>(fc.clients_per_round) /
      static_cast<double>(cfg.num_clients);
  if (std::isfinite(summary.eps_rdp)) {
    summary.eps_server =
        server_budget(summary.eps_rdp, cfg.delta,
                      static_cast<double>(cfg.num_clients), participation_rate)
            .epsilon;
  } else {
    summary.eps_server = inf;
  }
  summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

void write_summary_json(std::ostream& out, const RunConfig& cfg,
                        const RunSummary& s) {
  const double l = static_cast<double>(cfg.effective_clients_per_round()) /
                   static_cast<double>(cfg.num_clients);
  auto real = [](double x) -> nlohmann::ordered_json {
    if (!std::isfinite(x)) return nullptr;
    return x;
  };
  nlohmann::ordered_json j;
  j["config_hash"] = s.config_hash;
  j["variant"] = to_string(cfg.variant);
  j["model"] = to_string(cfg.model);
  j["seed"] = cfg.seed;
  j["rounds"] = s.rounds;
  j["dim"] = s.dim;
  j["num_blocks"] = s.num_blocks;
  j["initial_loss"] = real(s.initial_loss);
  j["final_loss"] = real(s.final_loss);
  j["final_acc"] = real(s.final_acc);
  j["eps_rdp"] = real(s.eps_rdp);
  j["eps_paper"] = real(s.eps_paper);
  j["eps_server"] = real(s.eps_server);
  j["delta"] = s.delta;
  j["delta_server"] = (s.delta / 2.0) * (1.0 / l + 1.0);
  out << j.dump(2) << '\n';
}

RunSummary run(const RunConfig& cfg) {
  cfg.validate();
  RunResult result = simulate(cfg);

  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "metrics.csv", std::ios::binary);
    write_metrics_header(csv);
    for (const auto& r : result.records) append_metric(csv, r);
  }
  {
    std::ofstream hist(dir / "histograms.csv", std::ios::binary);
    write_histogram_header(hist);
    for (const auto& r : result.records) append_histograms(hist, r);
  }
  {
    std::ofstream js(dir / "summary.json", std::ios::binary);
    write_summary_json(js, cfg, result.summary);
  }
  return result.summary;
}

const std::set<std::string>& default_ablation_axes() {
  static const std::set<std::string> axes = {
      "variant", "gamma", "aggregation", "bias_correction", "noise_multiplier"};
  return axes;
}

ComparisonTable compare(const std::vector<ComparisonArm>& arms,
                        const std::vector<std::uint64_t>& seeds,
                        const std::set<std::string>& axes) {
  if (arms.empty()) throw ConfigError("compare: no configurations");
  if (seeds.empty()) throw ConfigError("compare: no seeds");
  for (std::size_t a = 1; a < arms.size(); ++a) {
    for (const std::string& key : RunConfig::keys()) {
      if (!RunConfig::is_semantic(key) || key == "seed") continue;
      if (arms[a].config.get(key) != arms[0].config.get(key) &&
          axes.count(key) == 0) {
        throw ConfigError("compare: arm '" + arms[a].label +
                          "' differs from '" + arms[0].label + "' in '" + key +
                          "', which is not a declared ablation axis");
      }
    }
  }
  ComparisonTable table;
  for (const auto& arm : arms) {
    std::vector<double> losses;
    std::vector<double> accs;
    for (std::uint64_t seed : seeds) {
      RunConfig cfg = arm.config;
      cfg.seed = seed;
      const RunResult r = simulate(cfg);
      table.rows.push_back({arm.label, seed, r.summary.final_loss,
                            r.summary.final_acc, r.summary.eps_rdp});
      losses.push_back(r.summary.final_loss);
      accs.push_back(r.summary.final_acc);
    }
    ComparisonStat st;
    st.label = arm.label;
    st.n = seeds.size();
    for (double x : losses) st.mean_loss += x;
    for (double x : accs) st.mean_acc += x;
    st.mean_loss /= static_cast<double>(st.n);
    st.mean_acc /= static_cast<double>(st.n);
    st.std_loss = sample_std(losses, st.mean_loss);
    st.std_acc = sample_std(accs, st.mean_acc);
    table.stats.push_back(st);
  }
  return table;
}

std::vector<ComparisonArm> gamma_sweep_arms(const RunConfig& base) {
  std::vector<ComparisonArm> arms;
  for (double g : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    RunConfig c = base;
    c.gamma = g;
    arms.push_back({"gamma=" + format_real(g), c});
  }
  return arms;
}

std::vector<ComparisonArm> component_ablation_arms(const RunConfig& base) {
  RunConfig full = base;
  full.variant = OptimizerVariant::kDpFedAdamW;
  if (full.aggregation == AggregationMode::kNone) {
    full.aggregation = AggregationMode::kBlockMeanV;
  }
  full.bias_correction = true;
  if (full.gamma == 0.0) full.gamma = 0.5;

  RunConfig no_agg = full;
  no_agg.aggregation = AggregationMode::kNone;
  RunConfig no_bc = full;
  no_bc.bias_correction = false;
  RunConfig no_align = full;
  no_align.gamma = 0.0;
  return {{"w/o Agg", no_agg},
          {"w/o BC", no_bc},
          {"w/o Align", no_align},
          {"full", full}};
}

void write_comparison_rows(std::ostream& out, const ComparisonTable& table) {
  out << "label,seed,final_loss,final_acc,eps_rdp\n";
  for (const auto& r : table.rows) {
    out << r.label << ',' << r.seed << ',' << format_real(r.final_loss) << ','
        << format_real(r.final_acc) << ',' << format_real(r.eps_rdp) << '\n';
  }
}

void write_comparison_stats(std::ostream& out, const ComparisonTable& table) {
  out << "label,n,mean_loss,std_loss,mean_acc,std_acc\n";
  for (const auto& s : table.stats) {
    out << s.label << ',' << s.n << ',' << format_real(s.mean_loss) << ','
        << format_real(s.std_loss) << ',' << format_real(s.mean_acc) << ','
        << format_real(s.std_acc) << '\n';
  }
}

}  // namespace dpfl
