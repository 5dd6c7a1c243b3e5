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

#include "coulomb/fluctuation.hpp"

#include <cmath>

#include "coulomb/errors.hpp"
#include "coulomb/quadrature.hpp"

namespace coulomb::fluctuation {

RadialTestFunction rsquared() {
  return {[](double r) { return r * r; }, [](double r) { return 2.0 * r; },
          [](double) { return 2.0; }};
}

RadialTestFunction constant(double v) {
  return {[v](double) { return v; }, [](double) { return 0.0; },
          [](double) { return 0.0; }};
}

RadialTestFunction inv_one_plus_r2() {
  return {[](double r) { return 1.0 / (1.0 + r * r); },
          [](double r) {
            const double d = 1.0 + r * r;
            return -2.0 * r / (d * d);
          },
          [](double r) {
            const double d = 1.0 + r * r;
            return (6.0 * r * r - 2.0) / (d * d * d);
          }};
}

RadialTestFunction log_radius() {
  return {[](double r) { return std::log(r); },
          [](double r) { return 1.0 / r; },
          [](double r) { return -1.0 / (r * r); }};
}

RadialDecomposition decompose_radial(const RadialTestFunction& f,
                                     const DropletStructure& d,
                                     const orthopoly::PerturbedWeight& ramp) {
  require(d.has_gap(), "decompose_radial: needs a two-component droplet");
  RadialDecomposition out;
  out.lambda = f.f(d.a1()) - f.f(d.b0());
  const double lambda = out.lambda;
  const auto r0 = ramp;  // copy with its own lifetime inside the closures
  out.f1 = {[f, lambda, r0](double r) { return f.f(r) - lambda * r0.omega(r); },
            [f, lambda, r0](double r) {
              return f.d1(r) - lambda * r0.omega_d1(r);
            },
            [f, lambda, r0](double r) {
              return f.d2(r) - lambda * r0.omega_d2(r);
            }};
  return out;
}

double PoissonModification::eval(double r) const {
  for (size_t i = 0; i < droplet.components.size(); ++i)
    if (r >= droplet.components[i][0] && r <= droplet.components[i][1])
      return f_on_droplet(r);
  if (droplet.has_gap() && r > droplet.b0() && r < droplet.a1())
    return gap_a + gap_b * std::log(r);
  if (r < droplet.components.front()[0]) return f_on_droplet(droplet.components.front()[0]);
  return exterior_value;
}

PoissonModification poisson_modify(const RadialTestFunction& f,
                                   const DropletStructure& d) {
  PoissonModification pm;
  pm.droplet = d;
  pm.f_on_droplet = f.f;
  pm.exterior_value = f.f(d.components.back()[1]);
  if (d.has_gap()) {
    const double b0 = d.b0(), a1 = d.a1();
    pm.gap_b = (f.f(a1) - f.f(b0)) / std::log(a1 / b0);
    pm.gap_a = f.f(b0) - pm.gap_b * std::log(b0);
  }
  return pm;
}

namespace {

double laplacian_log_laplacian(const RadialPotential& pot, double r) {
  // lap(log lap Q) = (1/4)(u'' + u'/r), u = log lap Q, with lap Q and its
  // two radial derivatives assembled from the profile's closed forms.
  const double q1 = pot.d1(r), q2 = pot.d2(r), q3 = pot.d3(r),
               q4 = pot.d4(r);
  const double r2 = r * r;
  const double lap = 0.25 * (q2 + q1 / r);
  if (lap <= 0.0)
    throw OutsideDomain("laplacian_log_laplacian: lap Q not positive");
  const double lap1 = 0.25 * (q3 + q2 / r - q1 / r2);
  const double lap2 = 0.25 * (q4 + q3 / r - 2.0 * q2 / r2 + 2.0 * q1 / (r2 * r));
  const double u1 = lap1 / lap;
  const double u2 = lap2 / lap - u1 * u1;
  return 0.25 * (u2 + u1 / r);
}

double log_lap_d1(const RadialPotential& pot, double r) {
  const double q1 = pot.d1(r), q2 = pot.d2(r), q3 = pot.d3(r);
  const double lap = 0.25 * (q2 + q1 / r);
  if (lap <= 0.0) throw OutsideDomain("log_lap_d1: lap Q not positive");
  const double lap1 = 0.25 * (q3 + q2 / r - q1 / (r * r));
  return lap1 / lap;
}

}  // namespace

double neumann_jump_L(const RadialPotential& pot, const DropletStructure& d,
                      Edge edge) {
  auto L = [&](double r) {
    const double lap = potential::laplacian_radial(pot, r);
    if (lap <= 0.0) throw OutsideDomain("neumann_jump_L: lap Q not positive");
    return std::log(lap);
  };
  if (edge == Edge::ring_outer || !d.has_gap()) {
    // exterior extension is the constant boundary value
    const double bN = d.components.back()[1];
    return -log_lap_d1(pot, bN);
  }
  const double b0 = d.b0(), a1 = d.a1();
  const double beta = (L(a1) - L(b0)) / std::log(a1 / b0);
  if (edge == Edge::disk_outer) {
    // outward normal is +r
    return -(log_lap_d1(pot, b0) - beta / b0);
  }
  // ring_inner: outward normal is -r
  return +(log_lap_d1(pot, a1) - beta / a1);
}

EfVf ef_vf(const RadialTestFunction& f1, const RadialPotential& pot,
           const DropletStructure& d) {
  EfVf out;
  // bulk term (1/2) int_S f lap log lap Q dA = int_S f lap(log lap Q) r dr
  double bulk = 0.0;
  for (size_t i = 0; i < d.components.size(); ++i) {
    const double lo = std::max(d.components[i][0], 1e-9);
    const double hi = d.components[i][1];
    bulk += integrate(
        [&](double r) { return f1.f(r) * laplacian_log_laplacian(pot, r) * r; },
        lo, hi, 1e-11, 1e-13);
  }
  out.e_f += bulk;

  // boundary terms: ds = 2 pi r on each circle, so (1/8 pi) oint = (r/4) sum
  struct Bdry {
    double r;
    double normal;  // +1 outward in r, -1 inward
    Edge edge;
  };
  std::vector<Bdry> edges;
  if (d.has_gap()) {
    edges.push_back({d.b0(), +1.0, Edge::disk_outer});
    edges.push_back({d.a1(), -1.0, Edge::ring_inner});
    edges.push_back({d.b1(), +1.0, Edge::ring_outer});
  } else {
    edges.push_back({d.components.back()[1], +1.0, Edge::ring_outer});
  }
  for (const auto& e : edges) {
    out.e_f += 0.25 * e.r * e.normal * f1.d1(e.r);
    out.e_f += 0.25 * e.r * f1.f(e.r) * neumann_jump_L(pot, d, e.edge);
  }

  // v_f = (1/2) int_S (f')^2 r dr + (1/2) b^2 log(a1/b0) over the gap
  for (size_t i = 0; i < d.components.size(); ++i) {
    const double lo = std::max(d.components[i][0], 1e-9);
    const double hi = d.components[i][1];
    out.v_f += 0.5 * integrate(
                         [&](double r) {
                           const double df = f1.d1(r);
                           return df * df * r;
                         },
                         lo, hi, 1e-11, 1e-13);
  }
  if (d.has_gap()) {
    const double b = (f1.f(d.a1()) - f1.f(d.b0())) / std::log(d.a1() / d.b0());
    out.v_f += 0.5 * b * b * std::log(d.a1() / d.b0());
  }
  return out;
}

double sigma_of(const RadialTestFunction& f, const RadialPotential& pot,
                const DropletStructure& d) {
  double total = 0.0;
  for (size_t i = 0; i < d.components.size(); ++i) {
    const double lo = std::max(d.components[i][0], 1e-9);
    const double hi = d.components[i][1];
    total += integrate(
        [&](double r) {
          return 2.0 * f.f(r) * potential::laplacian_radial(pot, r) * r;
        },
        lo, hi, 1e-12, 1e-14);
  }
  return total;
}

double FluctPrediction::cgf(double t) const {
  double v = t * (e_f + lambda * x_n) + 0.5 * t * t * v_f;
  if (lambda != 0.0) {
    v += qdist::heine_cgf(lambda * t, heine_plus);
    v += qdist::heine_cgf(-lambda * t, heine_minus);
  }
  return v;
}

double FluctPrediction::mean() const {
  double m = e_f + lambda * x_n;
  if (lambda != 0.0)
    m += lambda * (qdist::heine_mean(heine_plus) -
                   qdist::heine_mean(heine_minus));
  return m;
}

namespace {

double heine_variance(const qdist::HeineParams& p) {
  // Var X = sum_j p_j (1 - p_j) over the Bernoulli ladder p_j =
  // theta q^j / (1 + theta q^j)
  double var = 0.0;
  double tq = p.theta;
  for (int i = 0; i < 100000; ++i) {
    const double pj = tq / (1.0 + tq);
    var += pj * (1.0 - pj);
    if (pj < 1e-16) break;
    tq *= p.q;
  }
  return var;
}

}  // namespace

double FluctPrediction::variance() const {
  double v = v_f;
  if (lambda != 0.0)
    v += lambda * lambda *
         (heine_variance(heine_plus) + heine_variance(heine_minus));
  return v;
}

FluctPrediction predict_total(const RadialTestFunction& f,
                              const RadialPotential& pot,
                              const DropletStructure& d,
                              const potential::GapGeometry& geom,
                              const orthopoly::PerturbedWeight& ramp, long n) {
  FluctPrediction pred;
  pred.n = n;
  auto dec = decompose_radial(f, d, ramp);
  pred.lambda = dec.lambda;
  auto ev = ef_vf(dec.f1, pot, d);
  pred.e_f = ev.e_f;
  pred.v_f = ev.v_f;
  pred.x_n = potential::frac_part(n, geom.tau_star);
  const double ratio = geom.r1 / geom.r2;
  const double q = ratio * ratio;
  pred.heine_plus = {std::exp(-geom.c) * std::pow(ratio, 1.0 + 2.0 * pred.x_n),
                     q};
  pred.heine_minus = {std::exp(geom.c) * std::pow(ratio, 1.0 - 2.0 * pred.x_n),
                      q};
  return pred;
}

nlohmann::json to_json(const FluctPrediction& p) {
  return {{"schema_version", 1},
          {"e_f", p.e_f},
          {"v_f", p.v_f},
          {"lambda", p.lambda},
          {"theta_plus", p.heine_plus.theta},
          {"theta_minus", p.heine_minus.theta},
          {"q", p.heine_plus.q},
          {"n", p.n},
          {"x_n", p.x_n}};
}

}  // namespace coulomb::fluctuation
