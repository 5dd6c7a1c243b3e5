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

#include <vector>

#include "coulomb/orthopoly.hpp"

namespace coulomb::free_energy {

// One ring-shaped gap between adjacent droplet components.
struct GapSpec {
  double rho;          // conformal type of the gap, in (0,1)
  double delta_inner;  // Laplacian of Q on the inner boundary
  double delta_outer;  // Laplacian of Q on the outer boundary
  double tau_mass;     // cumulative equilibrium mass inside the gap
};

struct GnTerm {
  struct PerGap {
    double rho, mu, x;
  };
  std::vector<PerGap> gaps;
  double value = 0.0;
};

// Oscillatory free-energy term: per gap, with x = frac(n tau_mass) and
// mu = sqrt(delta_inner/delta_outer) rho^{2x},
//   x log mu - x^2 log rho + log(-rho mu; rho^2)_inf
//   + log(-rho / mu; rho^2)_inf.
GnTerm gn_evaluate(const std::vector<GapSpec>& gaps, long n);

// log Z_n = log n! + sum_j log h_{j,n}(0), by exact quadrature.
double log_partition(const orthopoly::PerturbedWeight& w, long n,
                     int threads = 0);

// Least-squares fit of the smooth expansion
// C0 n^2 + C1 n log n + C2 n + C3 log n + C4 and the correlation of the fit
// residuals with the centered oscillatory term.
struct FreeEnergyFit {
  std::vector<long> n_values;
  std::vector<double> log_z;
  std::vector<double> fitted;
  std::vector<double> residuals;
  std::vector<double> gn_values;
  double coeff[5] = {0, 0, 0, 0, 0};
  double correlation = 0.0;  // Pearson, residuals vs centered gn
  double residual_sd = 0.0;
  double gn_sd = 0.0;
};

FreeEnergyFit fit_free_energy(const std::vector<long>& ns,
                              const std::vector<double>& log_z,
                              const std::vector<double>& gn);

}  // namespace coulomb::free_energy
