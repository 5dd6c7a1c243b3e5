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

// End-to-end verification suite.  Each numbered check prints one PASS/FAIL
// line; the process exits nonzero if any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "coulomb/conformal.hpp"
#include "coulomb/fluctuation.hpp"
#include "coulomb/free_energy.hpp"
#include "coulomb/orthopoly.hpp"
#include "coulomb/potential.hpp"
#include "coulomb/qdist.hpp"
#include "coulomb/rng.hpp"
#include "coulomb/sampler.hpp"
#include "oracles.hpp"

using namespace coulomb;
using complexd = std::complex<double>;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail, double seconds) {
  std::printf("[%s] %2d  %-34s %s  (%.1fs)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

struct Setup {
  potential::RadialPotential pot;
  potential::GapRadii radii;
  potential::DropletStructure droplet;
  potential::GapGeometry geom;
  orthopoly::QuasiPolyData qpd;
  double tau_star;
};

Setup make_setup(bool gap, double rho2 = 1.5, double delta2 = 4.0) {
  Setup s;
  s.pot = potential::make_ginibre_outpost(rho2, delta2);
  if (gap) s.pot = potential::scaled(s.pot, 1.25);
  s.tau_star = gap ? 0.8 : 1.0;
  s.radii = potential::solve_gap_radii(s.pot, s.tau_star);
  s.droplet = potential::droplet_structure(s.pot, s.radii.b0, s.radii.a1);
  s.geom =
      potential::gap_constants(s.pot, s.radii.b0, s.radii.a1, s.tau_star);
  s.qpd = orthopoly::QuasiPolyData::from_radial(s.pot, s.geom);
  return s;
}

char buf[256];

// ---------------------------------------------------------------- 1
void criterion1_heine() {
  Timer t;
  bool pass = true;
  double worst_norm = 0.0, worst_cgf = 0.0;
  for (double theta : {0.1, 1.0 / 3.0, 2.0 / 3.0, 1.0, 3.0}) {
    for (double q : {0.1, 4.0 / 9.0, 0.9}) {
      const qdist::HeineParams p{theta, q};
      double total = 0.0;
      std::vector<double> pmf(420);
      for (int j = 0; j < 420; ++j) {
        pmf[j] = qdist::heine_pmf(j, p);
        total += pmf[j];
      }
      worst_norm = std::max(worst_norm, std::abs(total - 1.0));
      for (double s = -3.0; s <= 3.0 + 1e-9; s += 0.75) {
        double msum = 0.0;
        for (int j = 0; j < 420; ++j) msum += std::exp(s * j) * pmf[j];
        worst_cgf = std::max(
            worst_cgf, std::abs(qdist::heine_cgf(s, p) - std::log(msum)));
      }
    }
  }
  pass = worst_norm < 1e-10 && worst_cgf < 1e-9 && t.elapsed() < 1.0;
  std::snprintf(buf, sizeof buf,
                "norm err %.2e (<1e-10), cgf err %.2e (<1e-9)", worst_norm,
                worst_cgf);
  report(1, "Heine normalization & CGF", pass, buf, t.elapsed());
}

// ---------------------------------------------------------------- 2
void criterion2_bifurcation() {
  Timer t;
  bool pass = true;
  std::string detail;
  for (bool gap : {false, true}) {
    Setup s = make_setup(gap);
    auto w = orthopoly::make_weight(s.pot, s.radii.b0, s.radii.a1, 0.0);
    // fixed comparison window across the n list (see README): the decay of
    // the two-peak formula is measured on the same index set for every n
    const int window = 10;
    double prev = -1.0;
    double last = 0.0;
    for (long n : {128L, 256L, 512L, 1024L}) {
      const double center = n * s.tau_star;
      std::vector<double> errs(2 * window + 1, 0.0);
      orthopoly::for_each_index(2 * window + 1, 0, [&](long k) {
        const long j = std::lround(center) - window + k;
        const double e = orthopoly::log_norm_exact(w, j, n);
        const double a = orthopoly::log_norm_asymptotic(s.qpd, j, n, 0.0);
        errs[k] = std::abs(e - a);
      });
      double emax = 0.0;
      for (double e : errs) emax = std::max(emax, e);
      if (prev > 0.0 && emax / prev >= 0.9) pass = false;
      prev = emax;
      last = emax;
    }
    if (last >= 0.15) pass = false;
    detail += (gap ? " gap E(1024)=" : "outpost E(1024)=") +
              std::to_string(last);
  }
  report(2, "norm bifurcation decay", pass, detail + " (<0.15, ratios <0.9)",
         t.elapsed());
}

// ---------------------------------------------------------------- 3
void criterion3_outpost_counts() {
  Timer t;
  Setup s = make_setup(false);
  auto w = orthopoly::make_weight(s.pot, s.radii.b0, s.radii.a1, 0.0);
  const long n = 256;
  auto ms = sampler::build_sampler(w, n, 4096, 20260810);
  auto batch = sampler::sample_counts(ms, 1.25, 100000);
  auto hp = conformal::heine_from_geometry(s.geom.r1, s.geom.r2, s.geom.c);
  const double tv = sampler::empirical_tv(
      batch.counts,
      [&](long j) {
        return j >= 0 ? qdist::heine_pmf(static_cast<int>(j), hp) : 0.0;
      },
      0, 0, 60);
  std::snprintf(buf, sizeof buf, "TV %.4f (<0.02), theta=%.4f q=%.4f", tv,
                hp.theta, hp.q);
  report(3, "outpost count law (n=256)", tv < 0.02 && t.elapsed() < 300.0, buf,
         t.elapsed());
}

// ---------------------------------------------------------------- 4
void criterion4_gap_oscillation() {
  Timer t;
  Setup s = make_setup(true);
  auto w = orthopoly::make_weight(s.pot, s.radii.b0, s.radii.a1, 0.0);
  const double ratio = s.geom.r1 / s.geom.r2;
  const double q = ratio * ratio;
  double tvs[2];
  qdist::DNormParams models[2];
  const long ns[2] = {320, 307};  // x_n = 0 and x_n = 0.6
  for (int i = 0; i < 2; ++i) {
    const long n = ns[i];
    const double x = potential::frac_part(n, s.tau_star);
    auto ms = sampler::build_sampler(w, n, 4096, 97531 + i);
    auto batch =
        sampler::sample_counts(ms, std::sqrt(w.m1 * w.m2), 100000);
    const long base = n - static_cast<long>(std::floor(n * s.tau_star));
    models[i] = {std::exp(-s.geom.c) * std::pow(ratio, 1.0 + 2.0 * x), q};
    tvs[i] = sampler::empirical_tv(
        batch.counts,
        [&](long j) { return qdist::dnorm_pmf(j, models[i]); }, -base, -30,
        30);
  }
  // oscillation detectability: TV between the two predictions
  double sep = 0.0;
  for (long j = -30; j <= 30; ++j)
    sep += std::abs(qdist::dnorm_pmf(j, models[0]) -
                    qdist::dnorm_pmf(j, models[1]));
  sep *= 0.5;
  const bool pass = tvs[0] < 0.03 && tvs[1] < 0.03 && sep > 0.1;
  std::snprintf(buf, sizeof buf,
                "TV(x=0) %.4f, TV(x=0.6) %.4f (<0.03); pred sep %.3f (>0.1)",
                tvs[0], tvs[1], sep);
  report(4, "gap oscillation (mth2)", pass && t.elapsed() < 600.0, buf,
         t.elapsed());
}

// ---------------------------------------------------------------- 5
void criterion5_cgf_envelope() {
  Timer t;
  Setup s = make_setup(false);
  auto w0 = orthopoly::make_weight(s.pot, s.radii.b0, s.radii.a1, 0.0);
  double c_fit = -1.0;
  bool pass = true;
  std::string detail = "ratio/env:";
  for (long n : {128L, 256L, 512L, 1024L}) {
    const double env =
        std::pow(std::log((double)n), 2.5) / std::sqrt((double)n);
    double worst = 0.0;
    for (double sv : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
      const double exact = orthopoly::cgf_count_exact(w0, n, sv, s.tau_star);
      const double pred =
          orthopoly::cgf_count_predicted(s.qpd, n, sv, s.tau_star);
      worst = std::max(worst, std::abs(exact - pred));
    }
    const double r = worst / env;
    if (c_fit < 0.0) c_fit = r;  // single constant pinned at the smallest n
    if (r > c_fit * 1.0 + 1e-12) pass = false;
    detail += " " + std::to_string(r);
  }
  report(5, "CGF envelope (main1)", pass, detail, t.elapsed());
}

// ---------------------------------------------------------------- 6
void criterion6_gaussian_layer() {
  Timer t;
  Setup s = make_setup(true);
  auto ramp = orthopoly::make_weight(s.pot, s.radii.b0, s.radii.a1, 0.0);
  const long n = 512;
  auto f = fluctuation::rsquared();
  auto dec = fluctuation::decompose_radial(f, s.droplet, ramp);
  auto ev = fluctuation::ef_vf(dec.f1, s.pot, s.droplet);
  const double sigma_f1 = fluctuation::sigma_of(dec.f1, s.pot, s.droplet);
  auto ms = sampler::build_sampler(ramp, n, 4096, 1234321);
  const std::size_t R = 20000;
  auto batch = sampler::sample_linear_stat(
      ms, [&](double r) { return dec.f1.f(r); }, sigma_f1, R);
  const double mean = oracles::mean_of(batch.lin_stats);
  const double var = oracles::variance_of(batch.lin_stats);
  const double se_mean = oracles::bootstrap_se(
      batch.lin_stats, oracles::mean_of, 400, 11);
  const double se_var = oracles::bootstrap_se(
      batch.lin_stats, oracles::variance_of, 400, 12);
  const bool mean_ok = std::abs(mean - ev.e_f) < 3.0 * se_mean;
  const bool var_ok = std::abs(var - ev.v_f) < 3.0 * se_var;
  // Ginibre oracle: v_f reproduces the independent-Gamma variance limit
  auto gin = potential::make_ginibre();
  potential::DropletStructure disk;
  disk.tau_star = 1.0;
  disk.components = {{0.0, 1.0}};
  disk.masses = {1.0};
  const double v_gin =
      fluctuation::ef_vf(fluctuation::rsquared(), gin, disk).v_f;
  const long ng = 1024;
  double v_exact = 0.0;
  for (long j = 0; j < ng; ++j) v_exact += (j + 1.0) / (double(ng) * ng);
  const bool gin_ok = std::abs(v_gin - v_exact) / v_exact < 0.01;
  std::snprintf(buf, sizeof buf,
                "mean %.4f vs e_f %.4f (3se %.4f); var %.4f vs v_f %.4f "
                "(3se %.4f); ginibre %.4f vs %.4f",
                mean, ev.e_f, 3.0 * se_mean, var, ev.v_f, 3.0 * se_var, v_gin,
                v_exact);
  report(6, "Gaussian layer (m7/main3)", mean_ok && var_ok && gin_ok, buf,
         t.elapsed());
}

// ---------------------------------------------------------------- 7
void criterion7_conformal() {
  Timer t;
  auto ell = conformal::ellipse_map(1.2, 0.8);
  const double rho = 1.5, delta1 = 1.0, delta2 = 4.0;
  const double mid = std::sqrt(rho);
  auto sol = conformal::annulus_dirichlet(ell, rho, [&](complexd z) {
    return std::abs(ell.invert(z)) < mid ? 0.5 * std::log(delta1)
                                         : 0.5 * std::log(delta2);
  });
  const double c_err = std::abs(sol.c - 0.5 * std::log(delta2 / delta1));
  auto holo = conformal::annulus_dirichlet(
      ell, rho, [](complexd z) { return (1.0 / z).real(); });
  const bool pass = c_err < 1e-10 && sol.compat_residual < 1e-12 &&
                    std::abs(holo.c) < 1e-10;
  std::snprintf(buf, sizeof buf,
                "c err %.2e (<1e-10), resid %.2e (<1e-12), holo c %.2e",
                c_err, sol.compat_residual, std::abs(holo.c));
  report(7, "conformal constants", pass, buf, t.elapsed());
}

// ---------------------------------------------------------------- 8
void criterion8_oracle_equivalence() {
  Timer t;
  // (a) 2D Gram-Schmidt vs exact radial norms at n = 24
  Setup s = make_setup(false);
  auto w = orthopoly::make_weight(s.pot, s.radii.b0, s.radii.a1, 0.0);
  const long n = 24;
  std::vector<std::array<double, 2>> annuli;
  for (const auto& win : s.pot.windows())
    annuli.push_back({std::max(win.lo, 1e-6), win.hi});
  auto grid = orthopoly::make_polar_grid(annuli, 320, 64);
  auto res = orthopoly::gram2d_oracle(
      grid, [&](complexd z) { return s.pot.value(std::abs(z)); },
      [&](complexd z) { return w.omega(std::abs(z)); }, 0.0, n, 24);
  double worst = 0.0;
  for (long j = 0; j <= 24; ++j)
    worst = std::max(worst,
                     std::abs(res.log_h[j] - orthopoly::log_norm_exact(w, j, n)));
  // (b) the normalization of the two-peak identity: the consistent reading
  // q1 - q2 = 2 tau* log(r1/r2) has a vanishing residual on the solved gap
  // geometry; the reciprocal reading (2/tau*) does not.
  Setup g = make_setup(true);
  const double lr = std::log(g.geom.r1 / g.geom.r2);
  const double resid_a = (g.qpd.q1_inf - g.qpd.q2_inf) - 2.0 * g.tau_star * lr;
  const double resid_b =
      (g.qpd.q1_inf - g.qpd.q2_inf) - (2.0 / g.tau_star) * lr;
  const bool pass = worst < 1e-8 && std::abs(resid_a) < 1e-9 &&
                    std::abs(resid_b) > 1e-2;
  std::snprintf(buf, sizeof buf,
                "gram2d err %.2e (<1e-8); kappa: resid(2tau*) %.1e, "
                "resid(2/tau*) %.2f",
                worst, std::abs(resid_a), std::abs(resid_b));
  report(8, "oracle equivalence & kappa", pass, buf, t.elapsed());
}

// ---------------------------------------------------------------- 9
void criterion9_gn_free_energy() {
  Timer t;
  // (a) double-path equality on 20 random draws
  rng::Stream stream(313, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    free_energy::GapSpec g;
    g.rho = 0.15 + 0.7 * stream.next_double();
    g.delta_inner = 0.5 + 3.0 * stream.next_double();
    g.delta_outer = 0.5 + 3.0 * stream.next_double();
    g.tau_mass = 0.2 + 0.7 * stream.next_double();
    const long n = 50 + static_cast<long>(stream.next_u64() % 200);
    const double x = n * g.tau_mass - std::floor(n * g.tau_mass);
    const double mu =
        std::sqrt(g.delta_inner / g.delta_outer) * std::pow(g.rho, 2.0 * x);
    double direct = x * std::log(mu) - x * x * std::log(g.rho);
    for (int which = 0; which < 2; ++which) {
      const double z = which == 0 ? g.rho * mu : g.rho / mu;
      double zq = z, logprod = 0.0;
      for (int i = 0; i < 4000 && std::abs(zq) > 1e-18; ++i) {
        logprod += std::log1p(zq);
        zq *= g.rho * g.rho;
      }
      direct += logprod;
    }
    worst = std::max(
        worst, std::abs(free_energy::gn_evaluate({g}, n).value - direct));
  }
  // (b) exploratory: wide-gap potential (outpost radius 4) resolves the
  // oscillation; the correlation is reported, not gated
  Setup wide;
  wide.pot = potential::scaled(potential::make_ginibre_outpost(4.0, 4.0), 1.25);
  wide.tau_star = 0.8;
  wide.radii = potential::solve_gap_radii(wide.pot, wide.tau_star);
  wide.geom = potential::gap_constants(wide.pot, wide.radii.b0, wide.radii.a1,
                                       wide.tau_star);
  auto w = orthopoly::make_weight(wide.pot, wide.radii.b0, wide.radii.a1, 0.0);
  std::vector<long> ns;
  std::vector<double> lz, gn;
  const std::vector<free_energy::GapSpec> gaps = {
      {wide.geom.r1 / wide.geom.r2, wide.geom.delta1, wide.geom.delta2,
       wide.tau_star}};
  for (long n = 125; n <= 145; ++n) {
    ns.push_back(n);
    lz.push_back(free_energy::log_partition(w, n));
    gn.push_back(free_energy::gn_evaluate(gaps, n).value);
  }
  auto fit = free_energy::fit_free_energy(ns, lz, gn);
  const bool pass = worst < 1e-12;
  std::snprintf(buf, sizeof buf,
                "double-path err %.2e (<1e-12); residual/Gn correlation "
                "%.3f (exploratory)",
                worst, fit.correlation);
  report(9, "Gn double path + free energy", pass, buf, t.elapsed());
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  Timer total;
  criterion1_heine();
  criterion2_bifurcation();
  criterion3_outpost_counts();
  criterion4_gap_oscillation();
  criterion5_cgf_envelope();
  criterion6_gaussian_layer();
  criterion7_conformal();
  criterion8_oracle_equivalence();
  criterion9_gn_free_energy();
  std::printf("%d criterion(s) failed; total %.1fs\n", g_failures,
              total.elapsed());
  return g_failures == 0 ? 0 : 1;
}
