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
#include <functional>
#include <string>
#include <vector>

#include "coulomb/orthopoly.hpp"

namespace coulomb::sampler {

using orthopoly::PerturbedWeight;

// Monotone-cubic (Fritsch-Carlson) interpolant of r as a function of the
// CDF value, tabulated on a per-index grid.
struct InverseCdf {
  std::vector<double> cdf;     // strictly increasing, 0 .. 1
  std::vector<double> radius;  // matching radii
  std::vector<double> slope;   // dr/dF at the nodes

  double sample(double u) const;  // u in [0,1)
};

// Exact sampler of the radial ensemble via the independent-moduli
// reduction: the n moduli are independent, the j-th with density
// proportional to r^{2j+1} e^{-n Q(r) + s omega(r)}.
struct ModuliSampler {
  long n = 0;
  std::uint64_t seed = 0;
  std::vector<InverseCdf> tables;  // one per index j
  double support_lo = 0.0, support_hi = 0.0;
};

ModuliSampler build_sampler(const PerturbedWeight& w, long n,
                            int table_points = 4096, std::uint64_t seed = 0,
                            int threads = 0);

struct SampleBatch {
  long n = 0;
  std::uint64_t seed = 0;
  std::size_t replicas = 0;
  std::vector<long> counts;        // particles with r >= threshold
  std::vector<double> lin_stats;   // sum f(R_j) - n sigma(f)
  std::vector<std::uint64_t> replica_keys;  // per-replica stream keys
};

// Draw `replicas` independent replicas and count moduli >= threshold.
SampleBatch sample_counts(const ModuliSampler& ms, double threshold,
                          std::size_t replicas, int threads = 0);

// Per-replica linear statistic sum_j f(R_j) - n sigma_f.
SampleBatch sample_linear_stat(const ModuliSampler& ms,
                               const std::function<double(double)>& f,
                               double sigma_f, std::size_t replicas,
                               int threads = 0);

// Combined draw: counts and any number of linear statistics from one pass.
void sample_joint(const ModuliSampler& ms, double threshold,
                  std::size_t replicas,
                  const std::vector<std::function<double(double)>>& fs,
                  const std::vector<double>& sigma_fs, SampleBatch& counts_out,
                  std::vector<std::vector<double>>& stats_out,
                  int threads = 0);

// Total variation (1/2) sum_j |phat(j) - p(j)| between the empirical law of
// the integer values and a model pmf, including the model's mass outside
// the scanned range.  `offset` shifts the observed values before comparing.
double empirical_tv(const std::vector<long>& values,
                    const std::function<double(long)>& model_pmf, long offset,
                    long model_lo, long model_hi);

// CSV export (replica, count, lin_stat) and a JSON summary.
void write_batch_csv(const SampleBatch& b, const std::string& path);

}  // namespace coulomb::sampler
