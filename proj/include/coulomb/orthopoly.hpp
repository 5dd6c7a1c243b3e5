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

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coulomb/conformal.hpp"
#include "coulomb/potential.hpp"

namespace coulomb::orthopoly {

using complexd = std::complex<double>;
using potential::GapGeometry;
using potential::RadialPotential;

// Weight exp(-n Q + s omega) with omega a quintic smoothstep ramp:
// omega = 0 for r <= m1, omega = 1 for r >= m2.
struct PerturbedWeight {
  RadialPotential pot;
  double s = 0.0;
  double m1 = 0.0, m2 = 0.0;

  double omega(double r) const;
  double omega_d1(double r) const;
  double omega_d2(double r) const;
};

// Places the ramp at 20% / 80% of the gap [b0, a1].
PerturbedWeight make_weight(const RadialPotential& pot, double b0, double a1,
                            double s);

// Natural-log bifurcation half width, ceil(log^2 n).
int bifurcation_halfwidth(long n);

// Deterministic strided parallel loop over indices 0..countminus one;
// threads <= 0 means hardware concurrency.
void for_each_index(long count, int threads,
                    const std::function<void(long)>& f);

// log of the squared norm of the monic degree-j polynomial (z^j in the
// radial case): log[ 2 int r^{2j+1} e^{-n Q(r) + s omega(r)} dr ], summed
// over the potential's windows in log space.
double log_norm_exact(const PerturbedWeight& w, long j, long n);

// Geometry-derived constants entering the two-peak norm asymptotics.
// In the radial case q_k(inf) = Q(r_k) and h_k(inf) = (1/2) log DeltaQ(r_k).
struct QuasiPolyData {
  GapGeometry geom;
  double q1_inf, q2_inf;
  double h1_inf, h2_inf;

  static QuasiPolyData from_radial(const RadialPotential& pot,
                                   const GapGeometry& g);
};

// Two-term norm asymptotics in the bifurcation regime:
//   log[ sqrt(2 pi / n) (e^{A0} + e^{A1 + s}) ],
//   A_k = (2j+1) log r_k - n q_k(inf) - h_k(inf).
// Throws RegimeError when |j - n tau*| exceeds twice the bifurcation width.
double log_norm_asymptotic(const QuasiPolyData& g, long j, long n, double s);

// Exact cumulant generating function of the count fluctuation by summing
// log-norm ratios over every index, with the gap-case centering
// -n s (1 - tau*).  Requires |s| <= log n.
double cgf_count_exact(const PerturbedWeight& w, long n, double s,
                       double tau_star, int threads = 0);

// Limit prediction.  Outpost (tau* = 1): Heine CGF with
// theta = (r1/r2) e^{-c}, q = (r1/r2)^2.  Gap: Heine(theta+_n) at s plus
// Heine(theta-_n) at -s plus the lattice offset s*x_n, with
//   theta+_n = e^{-c} (r1/r2)^{1+2 x_n},  theta-_n = e^{c} (r1/r2)^{1-2 x_n}.
double cgf_count_predicted(const QuasiPolyData& g, long n, double s,
                           double tau_star);

// Per-index table of exact and (in the bifurcation window) asymptotic
// log norms.
struct LogNormTable {
  struct Entry {
    long j;
    bool bifurcation;
    double log_h_exact;
    std::optional<double> log_h_asym;
  };
  long n = 0;
  std::vector<Entry> entries;
};

LogNormTable build_log_norm_table(const PerturbedWeight& w,
                                  const QuasiPolyData& g, long n,
                                  int threads = 0);
void write_csv(const LogNormTable& t, const std::string& path);

// Laurent data for quasi-polynomial evaluation in non-radial geometry.
// q1 and h1 are given by their pullbacks to the w-plane,
// f(psi(w)) = coeffs[0] + coeffs[1]/w + ..., holomorphic outside the unit
// circle.  q2 = q1 + 2 tau* log(rho), h2 = h1 + c.
struct ConformalQuasiData {
  conformal::ExteriorMap map;   // psi for the inner curve
  std::vector<complexd> q1_pullback;
  std::vector<complexd> h1_pullback;
  double rho;       // r2 / r1
  double tau_star;  // 1 for an outpost
  double c;
};

// Phi_{j,n}(z).  Radial geometry (no context): exactly z^j.  With a
// conformal context, evaluates the two-peak quasi-polynomial through the
// inner-curve data (branch = 1) or the outer-curve data (branch = 2, valid
// outside the outer curve).  Returned in log form: log Phi = log|Phi| + i arg.
complexd log_quasipoly(const ConformalQuasiData& ctx, long j, long n,
                       complexd z, int branch = 1);
complexd quasipoly_eval(const std::optional<ConformalQuasiData>& ctx, long j,
                        long n, complexd z);

// Max over the radius grid of |w_{j,n} - F_{j,n}| e^{+n(Q - obstacle_tau)/2}
// for the radial case, where w uses the exact norm and F the asymptotic one.
double wavefunction_compare(const PerturbedWeight& w, const QuasiPolyData& g,
                            long j, long n, const std::vector<double>& radii);

// Small-n planar Gram-Schmidt oracle on a polar quadrature grid.
struct PolarGrid {
  std::vector<double> r;   // radial nodes
  std::vector<double> wr;  // radial weights (include the Jacobian factor r)
  int n_theta = 0;
};

// Composite Gauss-Legendre radial nodes over the annuli, uniform in angle.
PolarGrid make_polar_grid(const std::vector<std::array<double, 2>>& annuli,
                          int radial_nodes_per_annulus, int n_theta);

struct Gram2DResult {
  std::vector<double> log_h;                      // per degree, monic norms
  std::vector<std::vector<complexd>> monic_coeffs;  // coeffs in z^k, k <= j
  double rho_hat = 1.0;                           // basis scale
};

// Modified Gram-Schmidt with one reorthogonalization pass on the scaled
// monomial basis (z/rho_hat)^k against the weight e^{-n Q(z) + s omega(z)}.
// Degrees 0..max_degree; max_degree capped at 48.
Gram2DResult gram2d_oracle(const PolarGrid& grid,
                           const std::function<double(complexd)>& Q,
                           const std::function<double(complexd)>& omega,
                           double s, long n, int max_degree,
                           double rho_hat = 0.0);

}  // namespace coulomb::orthopoly
