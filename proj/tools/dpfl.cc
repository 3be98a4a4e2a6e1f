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

// dpfl: command-line front end.
//
//   dpfl run --config demo.cfg --gamma 0 --output_dir out/
//   dpfl compare --preset gamma --seeds 0,1,2,3,4
//   dpfl account --sigma 1 --sample_rate 0.01 --local_steps 10 --rounds 100
//   dpfl config --config demo.cfg

#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpfl/accountant.h"
#include "dpfl/diagnostics.h"
#include "dpfl/errors.h"
#include "dpfl/runner.h"

namespace {

struct ConfigOptions {
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigOptions* opts) {
  cmd->add_option("--config", opts->config_path, "key = value config file");
  for (const std::string& key : dpfl::RunConfig::keys()) {
    cmd->add_option("--" + key, opts->overrides[key],
                    "override config key '" + key + "'");
  }
}

// File, then OUTPUT_DIR, then explicit flags.
dpfl::RunConfig resolve_config(const CLI::App* cmd, const ConfigOptions& opts) {
  dpfl::RunConfig cfg = opts.config_path.empty()
                            ? dpfl::RunConfig{}
                            : dpfl::load_config_file(opts.config_path);
  if (const char* env = std::getenv("OUTPUT_DIR"); env != nullptr && *env) {
    cfg.output_dir = env;
  }
  for (const auto& [key, value] : opts.overrides) {
    if (cmd->count("--" + key) > 0) cfg.set(key, value);
  }
  cfg.validate();
  if (cfg.threads > 0) omp_set_num_threads(static_cast<int>(cfg.threads));
  return cfg;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long long s = 0;
    try {
      s = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item[0] == '-') {
      throw dpfl::ConfigError("--seeds: bad seed '" + item + "'");
    }
    seeds.push_back(s);
  }
  if (seeds.empty()) throw dpfl::ConfigError("--seeds: empty list");
  return seeds;
}

int cmd_run(const CLI::App* cmd, const ConfigOptions& opts) {
  const dpfl::RunConfig cfg = resolve_config(cmd, opts);
  const dpfl::RunSummary s = dpfl::run(cfg);
  std::cout << "config_hash " << s.config_hash << "\n"
            << "initial_loss " << dpfl::format_real(s.initial_loss) << "\n"
            << "final_loss " << dpfl::format_real(s.final_loss) << "\n"
            << "final_acc " << dpfl::format_real(s.final_acc) << "\n"
            << "eps_rdp " << dpfl::format_real(s.eps_rdp) << "\n"
            << "eps_paper " << dpfl::format_real(s.eps_paper) << "\n"
            << "eps_server " << dpfl::format_real(s.eps_server) << "\n"
            << "wall_time_s " << s.wall_time_s << "\n"
            << "output " << cfg.output_dir << "\n";
  return 0;
}

int cmd_compare(const CLI::App* cmd, const ConfigOptions& opts,
                const std::string& preset, const std::string& seeds_text) {
  const dpfl::RunConfig base = resolve_config(cmd, opts);
  std::vector<dpfl::ComparisonArm> arms;
  if (preset == "gamma") {
    arms = dpfl::gamma_sweep_arms(base);
  } else if (preset == "components") {
    arms = dpfl::component_ablation_arms(base);
  } else if (preset == "single") {
    arms = {{"base", base}};
  } else {
    throw dpfl::ConfigError("--preset must be gamma, components or single");
  }
  const dpfl::ComparisonTable table =
      dpfl::compare(arms, parse_seeds(seeds_text));
  const std::filesystem::path dir(base.output_dir);
  std::filesystem::create_directories(dir);
  std::ofstream rows(dir / "compare_rows.csv", std::ios::binary);
  dpfl::write_comparison_rows(rows, table);
  std::ofstream stats(dir / "compare_summary.csv", std::ios::binary);
  dpfl::write_comparison_stats(stats, table);
  dpfl::write_comparison_stats(std::cout, table);
  return 0;
}

struct AccountOptions {
  double sigma = 1.0;
  double sample_rate = 0.01;
  std::size_t local_steps = 10;
  std::size_t rounds = 100;
  std::size_t every = 10;
  double delta = 1e-5;
  double num_clients = 10;
  double participation = 1.0;
};

int cmd_account(const AccountOptions& a) {
  if (a.every == 0) throw dpfl::ConfigError("--every must be >= 1");
  std::cout << "rounds,eps_rdp,eps_paper,eps_server,delta_server\n";
  dpfl::PrivacyLedger ledger;
  for (std::size_t t = 1; t <= a.rounds; ++t) {
    ledger.record(a.sigma, a.sample_rate, a.local_steps);
    if (t % a.every != 0 && t != a.rounds) continue;
    const double eps = dpfl::compose_and_convert(ledger, a.delta).epsilon;
    const dpfl::Budget server =
        dpfl::server_budget(eps, a.delta, a.num_clients, a.participation);
    std::cout << t << ',' << dpfl::format_real(eps) << ','
              << dpfl::format_real(dpfl::third_party_epsilon(
                     a.sample_rate, static_cast<double>(t),
                     static_cast<double>(a.local_steps), a.delta, a.sigma))
              << ',' << dpfl::format_real(server.epsilon) << ','
              << dpfl::format_real(server.delta) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private federated AdamW simulator"};
  app.require_subcommand(1);

  ConfigOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "run one experiment");
  add_config_options(run, &run_opts);

  ConfigOptions cmp_opts;
  std::string preset = "gamma";
  std::string seeds = "0,1,2,3,4";
  CLI::App* cmp = app.add_subcommand("compare", "paired-seed ablation table");
  add_config_options(cmp, &cmp_opts);
  cmp->add_option("--preset", preset, "gamma | components | single");
  cmp->add_option("--seeds", seeds, "comma-separated seed list");

  ConfigOptions show_opts;
  CLI::App* show = app.add_subcommand("config", "print the resolved config");
  add_config_options(show, &show_opts);

  AccountOptions acc;
  CLI::App* account = app.add_subcommand("account", "privacy budget table");
  account->add_option("--sigma", acc.sigma, "noise multiplier");
  account->add_option("--sample_rate", acc.sample_rate, "sampling rate q");
  account->add_option("--local_steps", acc.local_steps, "K");
  account->add_option("--rounds", acc.rounds, "T");
  account->add_option("--every", acc.every, "print every n rounds");
  account->add_option("--delta", acc.delta, "target delta");
  account->add_option("--num_clients", acc.num_clients, "N");
  account->add_option("--participation", acc.participation, "l");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run, run_opts);
    if (cmp->parsed()) return cmd_compare(cmp, cmp_opts, preset, seeds);
    if (show->parsed()) {
      const dpfl::RunConfig cfg = resolve_config(show, show_opts);
      std::cout << cfg.to_text() << "# hash " << cfg.hash() << "\n";
      return 0;
    }
    if (account->parsed()) return cmd_account(acc);
  } catch (const dpfl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dpfl::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
