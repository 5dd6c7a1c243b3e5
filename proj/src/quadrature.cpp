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

#include "coulomb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "coulomb/errors.hpp"

namespace coulomb {

namespace {

// 15-point Kronrod nodes on [-1,1] (positive half) with the embedded
// 7-point Gauss rule on the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GkResult {
  double integral;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double v = f(c - dx) + f(c + dx);
    res_k += kWgk[i] * v;
    if (i % 2 == 1) res_g += kWg[i / 2] * v;
  }
  res_g *= h;
  res_k *= h;
  return {res_k, std::abs(res_k - res_g)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol, int max_intervals) {
  if (a == b) return 0.0;
  struct Seg {
    double a, b, integral, error;
  };
  // start from several subdivisions: a single Kronrod interval can report a
  // deceptively small error on one-sided peaks
  std::deque<Seg> segs;
  double total = 0.0, total_err = 0.0;
  const int kInitial = 8;
  for (int i = 0; i < kInitial; ++i) {
    const double lo = a + (b - a) * i / kInitial;
    const double hi = a + (b - a) * (i + 1) / kInitial;
    auto r = gk15(f, lo, hi);
    segs.push_back({lo, hi, r.integral, r.error});
    total += r.integral;
    total_err += r.error;
  }
  int n = kInitial;
  while (total_err > rel_tol * std::abs(total) + abs_tol) {
    if (n >= max_intervals)
      throw QuadratureFailure("adaptive integration: interval budget hit");
    // split the worst segment
    auto worst = std::max_element(
        segs.begin(), segs.end(),
        [](const Seg& x, const Seg& y) { return x.error < y.error; });
    Seg s = *worst;
    segs.erase(worst);
    const double m = 0.5 * (s.a + s.b);
    auto l = gk15(f, s.a, m);
    auto r = gk15(f, m, s.b);
    total += l.integral + r.integral - s.integral;
    total_err += l.error + r.error - s.error;
    segs.push_back({s.a, m, l.integral, l.error});
    segs.push_back({m, s.b, r.integral, r.error});
    ++n;
  }
  // final deterministic re-sum in interval order
  std::sort(segs.begin(), segs.end(),
            [](const Seg& x, const Seg& y) { return x.a < y.a; });
  std::vector<double> parts;
  parts.reserve(segs.size());
  for (const auto& s : segs) parts.push_back(s.integral);
  return pairwise_sum(parts);
}

std::pair<double, double> maximize(const std::function<double(double)>& f,
                                   double a, double b, int scan_points,
                                   double xtol) {
  double best_x = a, best_v = -HUGE_VAL;
  for (int i = 0; i <= scan_points; ++i) {
    const double x = a + (b - a) * i / scan_points;
    const double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  const double h = (b - a) / scan_points;
  double lo = std::max(a, best_x - h);
  double hi = std::min(b, best_x + h);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > xtol * (1.0 + std::abs(lo))) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (lo + hi);
  const double vm = f(xm);
  if (vm >= f1 && vm >= f2) return {xm, vm};
  return f1 > f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

double find_root(const std::function<double(double)>& f, double a, double b,
                 double xtol, int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw NotConverged("find_root: bracket does not straddle");
  for (int it = 0; it < max_iter; ++it) {
    if (b - a < xtol * (1.0 + std::abs(a))) return 0.5 * (a + b);
    // secant proposal on even iterations, forced bisection on odd ones so
    // the bracket provably shrinks
    double m = 0.5 * (a + b);
    if (it % 2 == 0 && std::abs(fb - fa) > 1e-300) {
      const double sec = b - fb * (b - a) / (fb - fa);
      if (sec > a + 0.01 * (b - a) && sec < b - 0.01 * (b - a)) m = sec;
    }
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (fa * fm < 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  throw NotConverged("find_root: iteration limit");
}

double pairwise_sum(std::span<const double> x) {
  const size_t n = x.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const size_t h = n / 2;
  return pairwise_sum(x.subspan(0, h)) + pairwise_sum(x.subspan(h));
}

double log_sum_exp(std::span<const double> xs) {
  double m = -HUGE_VAL;
  for (double v : xs) m = std::max(m, v);
  if (m == -HUGE_VAL) return m;
  double s = 0.0;
  for (double v : xs) s += std::exp(v - m);
  return m + std::log(s);
}

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev initial guess, Newton on P_n
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

}  // namespace coulomb
