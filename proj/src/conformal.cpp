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

#include "coulomb/conformal.hpp"

#include <algorithm>
#include <cmath>

#include "coulomb/errors.hpp"

namespace coulomb::conformal {

using nlohmann::json;

namespace {

// In-place radix-2 FFT; n must be a power of two.
void fft(std::vector<complexd>& a, bool inverse) {
  const size_t n = a.size();
  require((n & (n - 1)) == 0, "fft: size must be a power of two");
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * M_PI / len * (inverse ? 1.0 : -1.0);
    const complexd wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      complexd w(1.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const complexd u = a[i + k];
        const complexd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= static_cast<double>(n);
}

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Newton iterates may step slightly inside |w| = 1 while converging; the
// Laurent series is still meaningful there for analytic curves.
complexd eval_unchecked(const ExteriorMap& m, complexd w) {
  complexd s = m.capacity * w;
  complexd iw = 1.0;
  for (const complexd& a : m.coeffs) {
    s += a * iw;
    iw /= w;
  }
  return s;
}

}  // namespace

complexd ExteriorMap::eval(complexd w) const {
  if (std::abs(w) < 1.0 - 1e-12)
    throw DomainError("ExteriorMap::eval: |w| < 1");
  complexd s = capacity * w;
  complexd iw = 1.0;
  for (const complexd& a : coeffs) {
    s += a * iw;
    iw /= w;
  }
  return s;
}

complexd ExteriorMap::deriv(complexd w) const {
  complexd s = capacity;
  complexd iw = 1.0 / (w * w);
  for (size_t k = 1; k < coeffs.size(); ++k) {
    s -= static_cast<double>(k) * coeffs[k] * iw;
    iw /= w;
  }
  return s;
}

complexd ExteriorMap::invert(complexd z, int max_iter) const {
  complexd w = z / capacity;
  if (std::abs(w) < 1.0) w /= std::abs(w);
  for (int it = 0; it < max_iter; ++it) {
    const complexd d = deriv(w);
    if (std::abs(d) < 1e-14)
      throw NotConverged("ExteriorMap::invert: derivative vanished");
    const complexd step = (eval_unchecked(*this, w) - z) / d;
    w -= step;
    if (std::abs(step) < 1e-14 * (1.0 + std::abs(w))) {
      if (std::abs(w) < 1.0 - 1e-9)
        throw DomainError("ExteriorMap::invert: point inside the base curve");
      if (std::abs(w) < 1.0) w /= std::abs(w);
      return w;
    }
  }
  throw NotConverged("ExteriorMap::invert: Newton did not converge");
}

ExteriorMap circle_map(double radius) {
  require(radius > 0.0, "circle_map: radius must be > 0");
  return {radius, {}};
}

ExteriorMap ellipse_map(double semi_a, double semi_b) {
  require(semi_a > 0.0 && semi_b > 0.0 && semi_a >= semi_b,
          "ellipse_map: need semi_a >= semi_b > 0");
  ExteriorMap m;
  m.capacity = 0.5 * (semi_a + semi_b);
  m.coeffs = {complexd(0.0), complexd(0.5 * (semi_a - semi_b))};
  return m;
}

ExteriorMap level_map(const ExteriorMap& m, double rho) {
  require(rho >= 1.0, "level_map: rho must be >= 1");
  ExteriorMap out;
  out.capacity = m.capacity * rho;
  out.coeffs = m.coeffs;
  double scale = 1.0;
  for (size_t k = 0; k < out.coeffs.size(); ++k) {
    out.coeffs[k] *= scale;
    scale /= rho;
  }
  return out;
}

void validate(const ExteriorMap& m, int grid) {
  require(m.capacity > 0.0, "ExteriorMap: capacity must be > 0");
  for (double radius : {1.0, 1.05, 1.2, 1.5, 2.0, 4.0}) {
    for (int k = 0; k < grid; ++k) {
      const double th = 2.0 * M_PI * k / grid;
      const complexd w = radius * complexd(std::cos(th), std::sin(th));
      if (std::abs(m.deriv(w)) < 1e-10)
        throw BadGeometry("ExteriorMap: psi' vanishes on {|w| >= 1}");
    }
  }
  // simple-curve check on psi(T): total tangent turning is 2*pi and no
  // non-adjacent segments intersect
  std::vector<complexd> pts(grid);
  for (int k = 0; k < grid; ++k) {
    const double th = 2.0 * M_PI * k / grid;
    pts[k] = m.eval(complexd(std::cos(th), std::sin(th)));
  }
  double turning = 0.0;
  for (int k = 0; k < grid; ++k) {
    const complexd t0 = pts[(k + 1) % grid] - pts[k];
    const complexd t1 = pts[(k + 2) % grid] - pts[(k + 1) % grid];
    turning += std::arg(t1 / t0);
  }
  if (std::abs(turning - 2.0 * M_PI) > 1e-6)
    throw BadGeometry("ExteriorMap: boundary curve winding is not 1");
  auto seg_intersect = [](complexd p1, complexd p2, complexd q1, complexd q2) {
    auto cross = [](complexd a, complexd b) {
      return a.real() * b.imag() - a.imag() * b.real();
    };
    const double d1 = cross(p2 - p1, q1 - p1);
    const double d2 = cross(p2 - p1, q2 - p1);
    const double d3 = cross(q2 - q1, p1 - q1);
    const double d4 = cross(q2 - q1, p2 - q1);
    return d1 * d2 < 0.0 && d3 * d4 < 0.0;
  };
  for (int i = 0; i < grid; ++i) {
    for (int j = i + 2; j < grid; ++j) {
      if (i == 0 && j == grid - 1) continue;  // adjacent around the seam
      if (seg_intersect(pts[i], pts[(i + 1) % grid], pts[j],
                        pts[(j + 1) % grid]))
        throw BadGeometry("ExteriorMap: boundary curve self-intersects");
    }
  }
}

double capacity_of(const ExteriorMap& m) { return m.capacity; }

std::vector<complexd> level_curve(const ExteriorMap& m, double rho,
                                  int k_points) {
  if (rho < 1.0) throw DomainError("level_curve: rho must be >= 1");
  require(k_points > 0, "level_curve: k_points must be positive");
  std::vector<complexd> out(k_points);
  for (int k = 0; k < k_points; ++k) {
    const double th = 2.0 * M_PI * k / k_points;
    out[k] = m.eval(rho * complexd(std::cos(th), std::sin(th)));
  }
  return out;
}

double harmonic_measure(const ExteriorMap& m, double rho2_over_rho1,
                        complexd z) {
  require(rho2_over_rho1 > 1.0, "harmonic_measure: level ratio must be > 1");
  complexd w;
  try {
    w = m.invert(z);
  } catch (const DomainError&) {
    throw OutsideGap("harmonic_measure: point inside the inner curve");
  }
  const double aw = std::abs(w);
  const double tol = 1e-10;
  if (aw < 1.0 - tol || aw > rho2_over_rho1 * (1.0 + tol))
    throw OutsideGap("harmonic_measure: point not in the gap");
  const double clamped = std::clamp(aw, 1.0, rho2_over_rho1);
  return std::log(clamped) / std::log(rho2_over_rho1);
}

double AnnulusDirichletSolution::eval_H(complexd w) const {
  const double r = std::abs(w);
  double v = a0 + (c / std::log(rho)) * std::log(r);
  complexd wp = w;        // w^m
  complexd wm = 1.0 / w;  // w^-m
  for (size_t m = 1; m <= h1_coeffs.size(); ++m) {
    const complexd gm = (m <= obstruction.size()) ? obstruction[m - 1]
                                                  : complexd(0.0);
    v += (gm * wp + h1_coeffs[m - 1] * wm).real();
    wp *= w;
    wm /= w;
  }
  return v;
}

complexd AnnulusDirichletSolution::eval_h1(complexd w) const {
  complexd v = a0;
  complexd wm = 1.0 / w;
  for (const complexd& d : h1_coeffs) {
    v += d * wm;
    wm /= w;
  }
  return v;
}

bool AnnulusDirichletSolution::condition_c_holds(double rel_tol) const {
  return compat_residual <= rel_tol * std::max(total_energy, 1e-300);
}

AnnulusDirichletSolution annulus_dirichlet(
    const ExteriorMap& m, double rho,
    const std::function<double(complexd)>& boundary_data, int modes) {
  require(rho > 1.0, "annulus_dirichlet: rho must be > 1");
  require(modes >= 4, "annulus_dirichlet: need at least 4 modes");

  size_t K = next_pow2(static_cast<size_t>(2 * modes));
  std::vector<complexd> inner, outer;
  double tail = 1e300;
  double total = 1.0;
  for (int attempt = 0; attempt < 5 && tail > 1e-12 * total; ++attempt, K *= 2) {
    inner.assign(K, 0.0);
    outer.assign(K, 0.0);
    for (size_t k = 0; k < K; ++k) {
      const double th = 2.0 * M_PI * k / K;
      const complexd w(std::cos(th), std::sin(th));
      inner[k] = boundary_data(m.eval(w));
      outer[k] = boundary_data(m.eval(rho * w));
    }
    fft(inner, false);
    fft(outer, false);
    for (auto& x : inner) x /= static_cast<double>(K);
    for (auto& x : outer) x /= static_cast<double>(K);
    // tail energy near the Nyquist mode
    tail = 0.0;
    total = 0.0;
    for (size_t k = 0; k < K; ++k) {
      const double e = std::norm(inner[k]) + std::norm(outer[k]);
      total += e;
      const size_t mm = k <= K / 2 ? k : K - k;
      if (mm >= K / 4) tail += e;
    }
  }
  const size_t Kf = inner.size();
  const int M = static_cast<int>(Kf / 4);  // resolved modes

  AnnulusDirichletSolution sol;
  sol.rho = rho;
  sol.modes_used = M;
  // mode 0
  const double A0 = inner[0].real();
  const double B0 = outer[0].real();
  sol.c = B0 - A0;
  sol.a0 = A0;
  sol.total_energy = A0 * A0 + sol.c * sol.c;
  sol.h1_coeffs.resize(M);
  sol.obstruction.resize(M);
  const double lr = std::log(rho);
  if (!(lr > 0.0)) throw IllConditioned("annulus_dirichlet: log(rho) <= 0");
  for (int mm = 1; mm <= M; ++mm) {
    const complexd U = inner[mm];                    // e^{i m th} coefficient
    const complexd V = outer[mm];
    const double rm = std::pow(rho, -mm);
    const double denom = 1.0 - rm * rm;
    if (std::abs(denom) < 1e-14)
      throw IllConditioned("annulus_dirichlet: degenerate mode system");
    // H restricted to |w|=r has e^{i m th} coefficient (gamma r^m + conj(delta) r^-m)/2
    const complexd gamma = 2.0 * (V * rm - U * rm * rm) / denom;
    const complexd delta_conj = 2.0 * U - gamma;
    sol.obstruction[mm - 1] = gamma;
    sol.h1_coeffs[mm - 1] = std::conj(delta_conj);
    sol.compat_residual += std::norm(gamma);
    sol.total_energy += std::norm(gamma) + std::norm(sol.h1_coeffs[mm - 1]);
  }
  return sol;
}

qdist::HeineParams heine_from_geometry(double r1, double r2, double c) {
  if (!(r2 > r1) || !(r1 > 0.0))
    throw BadGeometry("heine_from_geometry: need 0 < r1 < r2");
  const double ratio = r1 / r2;
  qdist::HeineParams p{ratio * std::exp(-c), ratio * ratio};
  if (!(p.q > 0.0 && p.q < 1.0))
    throw BadGeometry("heine_from_geometry: q outside (0,1)");
  return p;
}

json to_json(const ExteriorMap& m) {
  json cs = json::array();
  for (const auto& a : m.coeffs) cs.push_back({a.real(), a.imag()});
  return {{"schema_version", 1}, {"capacity", m.capacity}, {"coeffs", cs}};
}

ExteriorMap map_from_json(const json& j) {
  ExteriorMap m;
  m.capacity = j.at("capacity").get<double>();
  for (const auto& a : j.at("coeffs"))
    m.coeffs.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
  return m;
}

json to_json(const AnnulusDirichletSolution& s) {
  json h1 = json::array();
  for (const auto& d : s.h1_coeffs) h1.push_back({d.real(), d.imag()});
  return {{"schema_version", 1},
          {"c", s.c},
          {"h1_infinity", s.a0},
          {"h1_coeffs", h1},
          {"compat_residual", s.compat_residual},
          {"total_energy", s.total_energy},
          {"rho", s.rho},
          {"modes_used", s.modes_used}};
}

}  // namespace coulomb::conformal
