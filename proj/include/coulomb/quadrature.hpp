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

#include <cmath>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace coulomb {

// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
// Subdivides until the per-interval Kronrod error estimate meets
// rel_tol * |integral| + abs_tol.  Throws QuadratureFailure when the
// interval budget is exhausted first.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_tol = 0.0,
                 int max_intervals = 4000);

// Locates the maximum of f on [a, b]: coarse scan followed by golden-section
// refinement.  Returns {argmax, max}.
std::pair<double, double> maximize(const std::function<double(double)>& f,
                                   double a, double b, int scan_points = 129,
                                   double xtol = 1e-13);

// Root of f on a bracket [a, b] with f(a), f(b) of opposite sign.
// Bisection with secant acceleration; xtol is an absolute x tolerance.
double find_root(const std::function<double(double)>& f, double a, double b,
                 double xtol = 1e-14, int max_iter = 200);

// Pairwise (cascade) summation; deterministic for a fixed element order.
double pairwise_sum(std::span<const double> x);

inline double log_sum_exp(double a, double b) {
  double m = a > b ? a : b;
  if (m == -HUGE_VAL) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}
double log_sum_exp(std::span<const double> xs);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace coulomb
