// Copyright 2026 The coulombgas Authors
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

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coulomb/errors.hpp"
#include "coulomb/harness.hpp"

namespace {

int threads_from_env(int cli_threads) {
  if (cli_threads > 0) return cli_threads;
  if (const char* env = std::getenv("COULOMBGAS_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coulomb-gas spectral outpost / spectral gap toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  app.add_option("--config", config_path, "experiment config JSON")
      ->configurable(false);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed override")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--threads", threads, "worker thread count");

  auto* predict = app.add_subcommand("predict", "limit-law parameters and CGF curves");
  auto* norms = app.add_subcommand("norms", "exact vs asymptotic log norms");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo count statistics");
  auto* fluct = app.add_subcommand("fluct", "Gaussian-layer predictions");
  auto* fenergy = app.add_subcommand("free-energy", "free-energy expansion fit");

  auto* conf = app.add_subcommand("conformal", "annulus Dirichlet solve");
  std::string map_path, data_kind = "half-log-laplacian-constants";
  double rho = 1.5, delta1 = 1.0, delta2 = 4.0;
  conf->add_option("--map", map_path, "exterior map JSON")->required();
  conf->add_option("--rho", rho, "level ratio r2/r1");
  conf->add_option("--data", data_kind,
                   "boundary data: half-log-laplacian-constants | "
                   "holomorphic-trace");
  conf->add_option("--delta1", delta1, "Laplacian on the inner curve");
  conf->add_option("--delta2", delta2, "Laplacian on the outer curve");

  CLI11_PARSE(app, argc, argv);

  coulomb::harness::RunOptions opt;
  opt.out_dir = out_dir;
  opt.threads = threads_from_env(threads);
  if (seed_set) opt.seed_override = seed;

  try {
    std::vector<std::string> files;
    if (conf->parsed()) {
      files = coulomb::harness::cmd_conformal(map_path, rho, data_kind, delta1,
                                              delta2, opt);
    } else {
      if (config_path.empty()) {
        std::cerr << "error: --config is required for this subcommand\n";
        return 2;
      }
      auto cfg = coulomb::harness::load_config(config_path);
      cfg.threads = opt.threads;
      if (predict->parsed())
        files = coulomb::harness::cmd_predict(cfg, opt);
      else if (norms->parsed())
        files = coulomb::harness::cmd_compare_norms(cfg, opt);
      else if (simulate->parsed())
        files = coulomb::harness::cmd_simulate(cfg, opt);
      else if (fluct->parsed())
        files = coulomb::harness::cmd_fluct(cfg, opt);
      else if (fenergy->parsed())
        files = coulomb::harness::cmd_free_energy(cfg, opt);
    }
    for (const auto& f : files) std::cout << f << '\n';
    return 0;
  } catch (const coulomb::harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const coulomb::Error& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
