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

#include "coulomb/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include "coulomb/errors.hpp"
#include "coulomb/quadrature.hpp"

namespace coulomb::orthopoly {

double PerturbedWeight::omega(double r) const {
  if (r <= m1) return 0.0;
  if (r >= m2) return 1.0;
  const double x = (r - m1) / (m2 - m1);
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double PerturbedWeight::omega_d1(double r) const {
  if (r <= m1 || r >= m2) return 0.0;
  const double h = m2 - m1;
  const double x = (r - m1) / h;
  return 30.0 * x * x * (1.0 - x) * (1.0 - x) / h;
}

double PerturbedWeight::omega_d2(double r) const {
  if (r <= m1 || r >= m2) return 0.0;
  const double h = m2 - m1;
  const double x = (r - m1) / h;
  return 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x) / (h * h);
}

PerturbedWeight make_weight(const RadialPotential& pot, double b0, double a1,
                            double s) {
  require(a1 > b0, "make_weight: need b0 < a1");
  PerturbedWeight w;
  w.pot = pot;
  w.s = s;
  w.m1 = b0 + 0.2 * (a1 - b0);
  w.m2 = b0 + 0.8 * (a1 - b0);
  return w;
}

int bifurcation_halfwidth(long n) {
  const double l = std::log(static_cast<double>(n));
  return static_cast<int>(std::ceil(l * l));
}

namespace {

// One window's contribution log int_window exp(g) with
// g(r) = (2j+1) log r - n Q(r) + s omega(r), stabilized by the peak value.
double log_window_integral(const PerturbedWeight& w, const potential::Window&
                               win, long j, long n) {
  const double lo = std::max(win.lo, 1e-12);
  const double hi = win.hi;
  const double inv_tau = 1.0 / w.pot.scale_tau();
  auto g = [&](double r) {
    return (2.0 * j + 1.0) * std::log(r) -
           n * win.profile->value(r) * inv_tau + w.s * w.omega(r);
  };
  auto [peak, gmax] = maximize(g, lo, hi);
  auto integrand = [&](double r) { return std::exp(g(r) - gmax); };
  // split at the peak so each piece is one-sided
  double integral = 0.0;
  if (peak - lo > 1e-14)
    integral += integrate(integrand, lo, peak, 1e-12, 1e-16);
  if (hi - peak > 1e-14)
    integral += integrate(integrand, peak, hi, 1e-12, 1e-16);
  if (!(integral > 0.0))
    throw QuadratureFailure("log_norm_exact: vanished window integral");
  return gmax + std::log(integral);
}

}  // namespace

double log_norm_exact(const PerturbedWeight& w, long j, long n) {
  require(j >= 0 && n >= 1, "log_norm_exact: need j >= 0, n >= 1");
  const auto& wins = w.pot.windows();
  require(!wins.empty(), "log_norm_exact: potential has no windows");
  std::vector<double> parts;
  parts.reserve(wins.size());
  for (const auto& win : wins)
    parts.push_back(log_window_integral(w, win, j, n));
  return std::log(2.0) + log_sum_exp(parts);
}

QuasiPolyData QuasiPolyData::from_radial(const RadialPotential& pot,
                                         const GapGeometry& g) {
  QuasiPolyData d;
  d.geom = g;
  d.q1_inf = pot.value(g.r1);
  d.q2_inf = pot.value(g.r2);
  d.h1_inf = 0.5 * std::log(g.delta1);
  d.h2_inf = 0.5 * std::log(g.delta2);
  // gap matching: q1(inf) - q2(inf) = 2 tau* log(r1/r2); this is the radial
  // smooth-fit identity and fixes the normalization of the two-peak formula
  const double resid =
      (d.q1_inf - d.q2_inf) - 2.0 * g.tau_star * std::log(g.r1 / g.r2);
  if (std::abs(resid) > 1e-9)
    throw BadGeometry("QuasiPolyData: gap matching identity violated");
  return d;
}

double log_norm_asymptotic(const QuasiPolyData& g, long j, long n, double s) {
  const double center = n * g.geom.tau_star;
  const int width = bifurcation_halfwidth(n);
  if (std::abs(j - center) > 2.0 * width)
    throw RegimeError("log_norm_asymptotic: index outside bifurcation window");
  const double A0 =
      (2.0 * j + 1.0) * std::log(g.geom.r1) - n * g.q1_inf - g.h1_inf;
  const double A1 =
      (2.0 * j + 1.0) * std::log(g.geom.r2) - n * g.q2_inf - g.h2_inf;
  return 0.5 * std::log(2.0 * M_PI / n) + log_sum_exp(A0, A1 + s);
}

void for_each_index(long count, int threads,
                    const std::function<void(long)>& f) {
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = static_cast<int>(std::max<long>(1, std::min<long>(threads, count)));
  if (threads == 1) {
    for (long i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr error;
  std::mutex error_mu;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (long i = t; i < count; i += threads) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double cgf_count_exact(const PerturbedWeight& w, long n, double s,
                       double tau_star, int threads) {
  require(std::abs(s) <= std::log(static_cast<double>(n)) + 1e-12,
          "cgf_count_exact: |s| must not exceed log n");
  if (s == 0.0) return 0.0;
  PerturbedWeight ws = w;
  ws.s = s;
  PerturbedWeight w0 = w;
  w0.s = 0.0;
  std::vector<double> ratios(n);
  for_each_index(n, threads, [&](long j) {
    ratios[j] = log_norm_exact(ws, j, n) - log_norm_exact(w0, j, n);
  });
  return pairwise_sum(ratios) - n * s * (1.0 - tau_star);
}

double cgf_count_predicted(const QuasiPolyData& g, long n, double s,
                           double tau_star) {
  const double ratio = g.geom.r1 / g.geom.r2;
  const double q = ratio * ratio;
  if (tau_star >= 1.0 - 1e-12) {
    qdist::HeineParams p{ratio * std::exp(-g.geom.c), q};
    return qdist::heine_cgf(s, p);
  }
  const double x = potential::frac_part(n, tau_star);
  qdist::HeineParams plus{std::exp(-g.geom.c) * std::pow(ratio, 1.0 + 2.0 * x),
                          q};
  qdist::HeineParams minus{std::exp(g.geom.c) * std::pow(ratio, 1.0 - 2.0 * x),
                           q};
  // the count statistic lives on Z shifted by the fractional part x_n,
  // which contributes the linear term s*x_n to the fluctuation CGF
  return qdist::heine_cgf(s, plus) + qdist::heine_cgf(-s, minus) + s * x;
}

LogNormTable build_log_norm_table(const PerturbedWeight& w,
                                  const QuasiPolyData& g, long n,
                                  int threads) {
  LogNormTable t;
  t.n = n;
  t.entries.resize(n);
  const double center = n * g.geom.tau_star;
  const int width = bifurcation_halfwidth(n);
  for_each_index(n, threads, [&](long j) {
    LogNormTable::Entry e;
    e.j = j;
    e.bifurcation = std::abs(j - center) <= width;
    e.log_h_exact = log_norm_exact(w, j, n);
    if (e.bifurcation) e.log_h_asym = log_norm_asymptotic(g, j, n, w.s);
    t.entries[j] = e;
  });
  return t;
}

void write_csv(const LogNormTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("write_csv: cannot open " + path);
  out.precision(17);
  out << "j,regime,log_h_exact,log_h_asym,abs_err\n";
  for (const auto& e : t.entries) {
    out << e.j << ',' << (e.bifurcation ? "bifurcation" : "bulk") << ','
        << e.log_h_exact << ',';
    if (e.log_h_asym)
      out << *e.log_h_asym << ',' << std::abs(e.log_h_exact - *e.log_h_asym);
    else
      out << ',';
    out << '\n';
  }
}

namespace {

// Laurent evaluation f(psi(w)) = c0 + c1/w + ...
complexd laurent_eval(const std::vector<complexd>& c, complexd w) {
  complexd v = 0.0;
  complexd iw = 1.0;
  for (const complexd& a : c) {
    v += a * iw;
    iw /= w;
  }
  return v;
}

}  // namespace

complexd log_quasipoly(const ConformalQuasiData& ctx, long j, long n,
                       complexd z, int branch) {
  require(branch == 1 || branch == 2, "log_quasipoly: branch must be 1 or 2");
  const double r1 = ctx.map.capacity;
  const double r2 = r1 * ctx.rho;
  complexd w = ctx.map.invert(z);
  if (branch == 2 && std::abs(w) < ctx.rho * (1.0 - 1e-9))
    throw DomainError("log_quasipoly: branch 2 needs z outside the outer curve");

  // phi_1(z) = w, phi_2(z) = w / rho; both curves share the same w-plane.
  const complexd q1 = laurent_eval(ctx.q1_pullback, w);
  const complexd h1 = laurent_eval(ctx.h1_pullback, w);
  const double q1_inf = ctx.q1_pullback.empty() ? 0.0
                                                : ctx.q1_pullback[0].real();
  const double h1_inf = ctx.h1_pullback.empty() ? 0.0
                                                : ctx.h1_pullback[0].real();

  // sqrt(phi_k'(z)) with the branch fixed by positivity at infinity:
  // phi_1'(z) = 1 / psi'(w); the normalized derivative stays in the right
  // half plane for the analytic curves handled here.
  const complexd dpsi = ctx.map.deriv(w);
  const complexd ratio = dpsi / ctx.map.capacity;  // -> 1 at infinity
  if (ratio.real() <= 0.0)
    throw BranchError("log_quasipoly: sqrt branch left the principal sheet");

  double lr, qk_inf, hk_inf;
  complexd phik, qk, hk;
  if (branch == 1) {
    lr = std::log(r1);
    phik = w;
    qk = q1;
    hk = h1;
    qk_inf = q1_inf;
    hk_inf = h1_inf;
  } else {
    lr = std::log(r2);
    phik = w / ctx.rho;
    qk = q1 + 2.0 * ctx.tau_star * std::log(ctx.rho);
    hk = h1 + ctx.c;
    qk_inf = q1_inf + 2.0 * ctx.tau_star * std::log(ctx.rho);
    hk_inf = h1_inf + ctx.c;
  }
  // log Phi = (j+1/2) log r_k - (n qk_inf + hk_inf)/2
  //           + (1/2) log(phi_k'(z)) + j log phi_k + (n qk + hk)/2
  // with phi_k'(z) = 1 / (psi'(w) * (r_k / r_1)), i.e. log phi_k' =
  // -log(psi'/capacity) - log r_k.
  const double nd = static_cast<double>(n);
  const complexd log_phik = std::log(phik);
  const complexd log_dphik = -std::log(ratio) - lr;
  return (j + 0.5) * lr - 0.5 * (nd * qk_inf + hk_inf) + 0.5 * log_dphik +
         static_cast<double>(j) * log_phik + 0.5 * (nd * qk + hk);
}

complexd quasipoly_eval(const std::optional<ConformalQuasiData>& ctx, long j,
                        long n, complexd z) {
  if (!ctx) return std::pow(z, static_cast<double>(j));
  return std::exp(log_quasipoly(*ctx, j, n, z, 1));
}

double wavefunction_compare(const PerturbedWeight& w, const QuasiPolyData& g,
                            long j, long n, const std::vector<double>& radii) {
  const double log_h = log_norm_exact(w, j, n);
  const double log_c = log_norm_asymptotic(g, j, n, w.s);
  // |gamma - c^{-1/2}| = |e^{-log_h/2} - e^{-log_c/2}| in log form
  const double a = -0.5 * log_h, b = -0.5 * log_c;
  const double gap = std::abs(a - b);
  const double lead =
      gap > 0.0 ? std::max(a, b) + std::log(-std::expm1(-gap)) : -HUGE_VAL;
  const double tau = std::min(1.0, static_cast<double>(j) / n);
  double worst = 0.0;
  for (double r : radii) {
    if (!w.pot.contains(r)) continue;
    const double q_tilde = n * w.pot.value(r) - w.s * w.omega(r);
    const double obstacle = potential::obstacle_eval(w.pot, tau, r).value;
    // |gamma - c^{-1/2}| r^j e^{-n Qtilde/2} e^{ n(Q - obstacle)/2 }
    const double expo = j * std::log(r) - 0.5 * q_tilde +
                        0.5 * (n * w.pot.value(r) - n * obstacle);
    worst = std::max(worst, std::exp(lead + expo));
  }
  return worst;
}

PolarGrid make_polar_grid(const std::vector<std::array<double, 2>>& annuli,
                          int radial_nodes_per_annulus, int n_theta) {
  require(n_theta >= 4, "make_polar_grid: need at least 4 angles");
  PolarGrid grid;
  grid.n_theta = n_theta;
  std::vector<double> x, wq;
  gauss_legendre(radial_nodes_per_annulus, x, wq);
  for (const auto& a : annuli) {
    require(a[1] > a[0] && a[0] >= 0.0, "make_polar_grid: bad annulus");
    const double mid = 0.5 * (a[0] + a[1]);
    const double half = 0.5 * (a[1] - a[0]);
    for (int i = 0; i < radial_nodes_per_annulus; ++i) {
      const double r = mid + half * x[i];
      grid.r.push_back(r);
      grid.wr.push_back(half * wq[i] * r);  // includes the Jacobian r
    }
  }
  return grid;
}

Gram2DResult gram2d_oracle(const PolarGrid& grid,
                           const std::function<double(complexd)>& Q,
                           const std::function<double(complexd)>& omega,
                           double s, long n, int max_degree, double rho_hat) {
  require(max_degree >= 0, "gram2d_oracle: negative degree");
  if (max_degree > 48)
    throw IllConditioned("gram2d_oracle: degree above the double-precision cap");
  const size_t nr = grid.r.size();
  const int nt = grid.n_theta;
  const size_t npts = nr * nt;
  require(npts > 0, "gram2d_oracle: empty grid");

  if (rho_hat <= 0.0) {
    // crude capacity estimate: radius containing the weight's bulk
    double rmax = 0.0;
    for (double r : grid.r) rmax = std::max(rmax, r);
    rho_hat = 0.75 * rmax;
  }

  // point weights sqrt(w_k) e^{-(n Q - s omega)/2}; points with +inf
  // potential get zero weight
  std::vector<complexd> zs(npts);
  std::vector<double> sq(npts);
  const double dtheta = 2.0 * M_PI / nt;
  for (size_t ir = 0; ir < nr; ++ir) {
    for (int it = 0; it < nt; ++it) {
      const size_t k = ir * nt + it;
      const double th = dtheta * it;
      const complexd z = grid.r[ir] * complexd(std::cos(th), std::sin(th));
      zs[k] = z;
      const double qv = Q(z);
      if (!std::isfinite(qv)) {
        sq[k] = 0.0;
        continue;
      }
      const double expo = -0.5 * (n * qv - s * omega(z));
      // area measure dA = dx dy / pi = r dr dtheta / pi
      sq[k] = std::sqrt(grid.wr[ir] * dtheta / M_PI) * std::exp(expo);
    }
  }

  const int m = max_degree + 1;
  std::vector<std::vector<complexd>> basis(m, std::vector<complexd>(npts));
  for (size_t k = 0; k < npts; ++k) {
    const complexd zb = zs[k] / rho_hat;
    complexd p = 1.0;
    for (int d = 0; d < m; ++d) {
      basis[d][k] = p * sq[k];
      p *= zb;
    }
  }

  auto dot = [&](const std::vector<complexd>& a,
                 const std::vector<complexd>& b) {
    complexd sum = 0.0;
    for (size_t k = 0; k < npts; ++k) sum += std::conj(a[k]) * b[k];
    return sum;
  };

  Gram2DResult res;
  res.rho_hat = rho_hat;
  res.log_h.resize(m);
  res.monic_coeffs.assign(m, {});
  std::vector<std::vector<complexd>> u(m);
  // coefficients of each orthogonalized vector in the scaled monomial basis
  std::vector<std::vector<complexd>> coef(m);
  std::vector<double> norm2(m);
  double prev_pivot = 0.0;
  for (int d = 0; d < m; ++d) {
    u[d] = basis[d];
    coef[d].assign(d + 1, complexd(0.0));
    coef[d][d] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < d; ++i) {
        const complexd proj = dot(u[i], u[d]) / norm2[i];
        for (size_t k = 0; k < npts; ++k) u[d][k] -= proj * u[i][k];
        for (int t = 0; t <= i; ++t) coef[d][t] -= proj * coef[i][t];
      }
    }
    norm2[d] = dot(u[d], u[d]).real();
    const double pivot = std::sqrt(norm2[d]);
    if (d > 0 && pivot < 1e-13 * prev_pivot)
      throw IllConditioned("gram2d_oracle: Gram pivot collapsed");
    prev_pivot = std::max(prev_pivot, pivot);
    // monic in z^d: scaled-basis leading coefficient is coef[d][d] = 1, so
    // p_d(z) = rho_hat^d * sum_t coef[d][t] (z/rho_hat)^t
    res.log_h[d] = 2.0 * d * std::log(rho_hat) + std::log(norm2[d]);
    res.monic_coeffs[d].assign(d + 1, complexd(0.0));
    for (int t = 0; t <= d; ++t)
      res.monic_coeffs[d][t] =
          coef[d][t] * std::pow(rho_hat, static_cast<double>(d - t));
  }
  return res;
}

}  // namespace coulomb::orthopoly
