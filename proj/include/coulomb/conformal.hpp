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
#include <string>
#include <vector>

#include <json.hpp>

#include "coulomb/qdist.hpp"

namespace coulomb::conformal {

using complexd = std::complex<double>;

// Exterior map given by Laurent data: psi(w) = capacity*w + a_0 + a_1/w + ...
// maps {|w| >= 1} onto the exterior of an analytic Jordan curve.  The
// inverse direction (the normalized map phi_1 of the curve's exterior onto
// the exterior disc) is evaluated by Newton inversion.
struct ExteriorMap {
  double capacity = 1.0;
  std::vector<complexd> coeffs;  // a_0, a_1, ...

  complexd eval(complexd w) const;   // throws DomainError for |w| < 1
  complexd deriv(complexd w) const;  // psi'(w)
  // phi_1(z): Newton inversion with initial guess z / capacity.
  complexd invert(complexd z, int max_iter = 50) const;
};

ExteriorMap circle_map(double radius);
ExteriorMap ellipse_map(double semi_a, double semi_b);

// The curve {|phi_1| = rho} has exterior map w -> psi(rho w) with capacity
// rho * capacity; exact in the Laurent data.
ExteriorMap level_map(const ExteriorMap& m, double rho);

// Numeric sanity check: psi' nonvanishing on a grid of {|w| >= 1} and the
// boundary curve psi(T) is simple (tangent winding + self-intersection scan).
// Throws BadGeometry on failure.
void validate(const ExteriorMap& m, int grid = 256);

double capacity_of(const ExteriorMap& m);

std::vector<complexd> level_curve(const ExteriorMap& m, double rho,
                                  int k_points);

// Harmonic measure of the gap between the base curve and its rho-level
// curve: log|phi_1(z)| / log(rho), 0 on the inner curve and 1 on the outer.
double harmonic_measure(const ExteriorMap& m, double rho2_over_rho1,
                        complexd z);

// Solution of the Dirichlet problem on the gap pulled back to the annulus
// {1 <= |w| <= rho}, split as H = Re h1 + c * varpi.  h1 is normalized to be
// real at infinity; compat_residual is the l2 mass of the positive-power
// Laurent coefficients of h1's pullback, which must vanish for h1 to extend
// holomorphically outside the inner curve.
struct AnnulusDirichletSolution {
  double c = 0.0;
  double a0 = 0.0;                   // h1(infinity)
  std::vector<complexd> h1_coeffs;   // delta_m, m >= 1: h1 = a0 + sum delta_m w^-m
  std::vector<complexd> obstruction; // gamma_m, m >= 1 (positive powers)
  double compat_residual = 0.0;      // sum |gamma_m|^2
  double total_energy = 0.0;         // sum of all squared coefficients
  double rho = 0.0;
  int modes_used = 0;

  // harmonic solution at a point of the closed annulus (w-coordinates)
  double eval_H(complexd w) const;
  // pullback of h1 (only the extendable part)
  complexd eval_h1(complexd w) const;
  bool condition_c_holds(double rel_tol = 1e-8) const;
};

AnnulusDirichletSolution annulus_dirichlet(
    const ExteriorMap& m, double rho,
    const std::function<double(complexd)>& boundary_data, int modes = 256);

// theta = (r1/r2) e^{-c}, q = (r1/r2)^2.  Throws BadGeometry if r2 <= r1
// or the resulting q leaves (0,1).
qdist::HeineParams heine_from_geometry(double r1, double r2, double c);

nlohmann::json to_json(const ExteriorMap& m);
ExteriorMap map_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AnnulusDirichletSolution& s);

}  // namespace coulomb::conformal
