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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coulomb/potential.hpp"

namespace coulomb::harness {

// Raised for malformed or inconsistent configuration; the CLI maps it to
// exit code 2 (numeric failures map to 3).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { outpost, gap };

struct ExperimentConfig {
  potential::RadialPotential pot;
  nlohmann::json pot_json;  // as given, for hashing and echo
  Mode mode = Mode::outpost;
  std::vector<long> n_values;
  std::vector<double> s_grid;
  std::vector<double> t_grid;
  std::size_t replicas = 10000;
  std::uint64_t seed = 1;
  std::optional<double> threshold;
  std::string test_function = "r_squared";
  int threads = 0;

  std::uint64_t hash() const;
};

// Parses and validates; error messages name the offending key.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// FNV-1a of a canonical JSON dump.
std::uint64_t fnv1a(const std::string& text);

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  int threads = 0;
};

// Each command writes its files under out_dir and returns the paths.
std::vector<std::string> cmd_predict(const ExperimentConfig& cfg,
                                     const RunOptions& opt);
std::vector<std::string> cmd_compare_norms(const ExperimentConfig& cfg,
                                           const RunOptions& opt);
std::vector<std::string> cmd_simulate(const ExperimentConfig& cfg,
                                      const RunOptions& opt);
std::vector<std::string> cmd_fluct(const ExperimentConfig& cfg,
                                   const RunOptions& opt);
std::vector<std::string> cmd_free_energy(const ExperimentConfig& cfg,
                                         const RunOptions& opt);
// Conformal command: solves the annulus Dirichlet problem for a map file.
std::vector<std::string> cmd_conformal(const std::string& map_path, double rho,
                                       const std::string& data_kind,
                                       double delta1, double delta2,
                                       const RunOptions& opt);

}  // namespace coulomb::harness
