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

#include <functional>
#include <json.hpp>

#include "coulomb/orthopoly.hpp"
#include "coulomb/potential.hpp"
#include "coulomb/qdist.hpp"

namespace coulomb::fluctuation {

using potential::DropletStructure;
using potential::RadialPotential;

// A smooth radial test function with two closed-form derivatives.
struct RadialTestFunction {
  std::function<double(double)> f;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

RadialTestFunction rsquared();                  // f(r) = r^2
RadialTestFunction constant(double v);          // f(r) = v
RadialTestFunction inv_one_plus_r2();           // f(r) = 1/(1+r^2)
RadialTestFunction log_radius();                // f(r) = log r

// Dirichlet split of f across the gap: lambda = f(a1) - f(b0), and
// f1 = f - lambda * omega lies in the Gaussian class (its gap-harmonic
// extension has no log component).  The step omega is the same quintic
// ramp used by the perturbed weights.
struct RadialDecomposition {
  RadialTestFunction f1;
  double lambda = 0.0;
};
RadialDecomposition decompose_radial(const RadialTestFunction& f,
                                     const DropletStructure& d,
                                     const orthopoly::PerturbedWeight& ramp);

// Piecewise Poisson modification: f on the droplet, a + b log r on the gap,
// the constant f(b_N) on the unbounded component.
struct PoissonModification {
  DropletStructure droplet;
  double gap_a = 0.0, gap_b = 0.0;  // gap harmonic a + b log r
  double exterior_value = 0.0;
  std::function<double(double)> f_on_droplet;

  double eval(double r) const;
};
PoissonModification poisson_modify(const RadialTestFunction& f,
                                   const DropletStructure& d);

enum class Edge { disk_outer, ring_inner, ring_outer };

// Neumann jump -d_N (L - L^S) of L = log(Laplacian of Q) at a droplet edge,
// with L^S the bounded harmonic extension of the boundary trace into the
// complementary component and N the outward normal of the droplet.
double neumann_jump_L(const RadialPotential& pot, const DropletStructure& d,
                      Edge edge);

// Mean and variance of the limiting Gaussian fluctuation of a test function
// in the Gaussian class:
//   e_f = (1/2) int_S f lap(log lap Q) dA + (1/8 pi) oint dS d_n f ds
//         + (1/8 pi) oint dS f N^S(L) ds,
//   v_f = (1/4) int |grad f^S|^2 dA,
// with dA = dx dy / pi and boundary circles carrying weight 2 pi r.
struct EfVf {
  double e_f = 0.0;
  double v_f = 0.0;
};
EfVf ef_vf(const RadialTestFunction& f1, const RadialPotential& pot,
           const DropletStructure& d);

// Equilibrium integral sigma(f) = 2 int_S f (lap Q) r dr.
double sigma_of(const RadialTestFunction& f, const RadialPotential& pot,
                const DropletStructure& d);

// Combined prediction for fluct_n f, f = f1 + lambda * omega:
// Gaussian part (e_f, v_f) of f1, the two n-dependent Heine laws, and the
// lattice offset x_n.  The predicted CGF is
//   F(t) = heine_cgf(lambda t; theta+) + heine_cgf(-lambda t; theta-)
//          + t (e_f + lambda x_n) + t^2 v_f / 2.
struct FluctPrediction {
  double e_f = 0.0;
  double v_f = 0.0;
  double lambda = 0.0;
  double x_n = 0.0;
  long n = 0;
  qdist::HeineParams heine_plus{1.0, 0.5};
  qdist::HeineParams heine_minus{1.0, 0.5};

  double cgf(double t) const;
  double mean() const;      // e_f + lambda (E X+ - E X- + x_n)
  double variance() const;  // v_f + lambda^2 (Var X+ + Var X-)
};

FluctPrediction predict_total(const RadialTestFunction& f,
                              const RadialPotential& pot,
                              const DropletStructure& d,
                              const potential::GapGeometry& geom,
                              const orthopoly::PerturbedWeight& ramp, long n);

nlohmann::json to_json(const FluctPrediction& p);

}  // namespace coulomb::fluctuation
