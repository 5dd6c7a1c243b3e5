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

#include "coulomb/free_energy.hpp"

#include <cmath>

#include "coulomb/errors.hpp"
#include "coulomb/qdist.hpp"
#include "coulomb/quadrature.hpp"

namespace coulomb::free_energy {

GnTerm gn_evaluate(const std::vector<GapSpec>& gaps, long n) {
  GnTerm out;
  std::vector<double> parts;
  for (const auto& g : gaps) {
    require(g.rho > 0.0 && g.rho < 1.0, "gn_evaluate: rho must lie in (0,1)");
    require(g.delta_inner > 0.0 && g.delta_outer > 0.0,
            "gn_evaluate: Laplacians must be positive");
    const double x = potential::frac_part(n, g.tau_mass);
    const double mu =
        std::sqrt(g.delta_inner / g.delta_outer) * std::pow(g.rho, 2.0 * x);
    const double q = g.rho * g.rho;
    parts.push_back(x * std::log(mu) - x * x * std::log(g.rho));
    parts.push_back(qdist::log_qpoch_inf(-g.rho * mu, q));
    parts.push_back(qdist::log_qpoch_inf(-g.rho / mu, q));
    out.gaps.push_back({g.rho, mu, x});
  }
  out.value = pairwise_sum(parts);
  return out;
}

double log_partition(const orthopoly::PerturbedWeight& w, long n,
                     int threads) {
  orthopoly::PerturbedWeight w0 = w;
  w0.s = 0.0;
  std::vector<double> parts(n);
  orthopoly::for_each_index(n, threads, [&](long j) {
    parts[j] = orthopoly::log_norm_exact(w0, j, n);
  });
  return std::lgamma(static_cast<double>(n) + 1.0) + pairwise_sum(parts);
}

FreeEnergyFit fit_free_energy(const std::vector<long>& ns,
                              const std::vector<double>& log_z,
                              const std::vector<double>& gn) {
  require(ns.size() >= 6, "fit_free_energy: need at least 6 n values");
  require(ns.size() == log_z.size() && ns.size() == gn.size(),
          "fit_free_energy: mismatched inputs");
  const size_t m = ns.size();
  // normal equations for the 5-column basis
  double ata[5][5] = {};
  double atb[5] = {};
  auto basis = [](double n, int k) -> double {
    switch (k) {
      case 0: return n * n;
      case 1: return n * std::log(n);
      case 2: return n;
      case 3: return std::log(n);
      default: return 1.0;
    }
  };
  for (size_t i = 0; i < m; ++i) {
    const double n = static_cast<double>(ns[i]);
    for (int a = 0; a < 5; ++a) {
      for (int b = 0; b < 5; ++b) ata[a][b] += basis(n, a) * basis(n, b);
      atb[a] += basis(n, a) * log_z[i];
    }
  }
  // gaussian elimination with partial pivoting
  double aug[5][6];
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) aug[a][b] = ata[a][b];
    aug[a][5] = atb[a];
  }
  for (int col = 0; col < 5; ++col) {
    int piv = col;
    for (int rr = col + 1; rr < 5; ++rr)
      if (std::abs(aug[rr][col]) > std::abs(aug[piv][col])) piv = rr;
    if (std::abs(aug[piv][col]) < 1e-300)
      throw IllConditioned("fit_free_energy: singular normal equations");
    for (int b = 0; b < 6; ++b) std::swap(aug[col][b], aug[piv][b]);
    for (int rr = 0; rr < 5; ++rr) {
      if (rr == col) continue;
      const double fac = aug[rr][col] / aug[col][col];
      for (int b = col; b < 6; ++b) aug[rr][b] -= fac * aug[col][b];
    }
  }
  FreeEnergyFit fit;
  fit.n_values = ns;
  fit.log_z = log_z;
  fit.gn_values = gn;
  for (int a = 0; a < 5; ++a) fit.coeff[a] = aug[a][5] / aug[a][a];
  fit.fitted.resize(m);
  fit.residuals.resize(m);
  double rmean = 0.0, gmean = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double n = static_cast<double>(ns[i]);
    double v = 0.0;
    for (int a = 0; a < 5; ++a) v += fit.coeff[a] * basis(n, a);
    fit.fitted[i] = v;
    fit.residuals[i] = log_z[i] - v;
    rmean += fit.residuals[i];
    gmean += gn[i];
  }
  rmean /= m;
  gmean /= m;
  double rr = 0.0, gg = 0.0, rg = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double a = fit.residuals[i] - rmean;
    const double b = gn[i] - gmean;
    rr += a * a;
    gg += b * b;
    rg += a * b;
  }
  fit.residual_sd = std::sqrt(rr / m);
  fit.gn_sd = std::sqrt(gg / m);
  fit.correlation = (rr > 0.0 && gg > 0.0) ? rg / std::sqrt(rr * gg) : 0.0;
  return fit;
}

}  // namespace coulomb::free_energy
