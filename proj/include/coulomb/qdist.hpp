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

#include <cstdint>

namespace coulomb::qdist {

// Parameters of the Heine law on {0,1,2,...}:
//   P(X=j) = q^{j(j-1)/2} theta^j / ((q;q)_j (-theta;q)_inf).
struct HeineParams {
  double theta;  // > 0
  double q;      // in (0,1)
};

// Parameters of the discrete normal law on Z: P(Y=j) ∝ theta^j q^{j(j-1)/2}.
struct DNormParams {
  double theta;  // > 0
  double q;      // in (0,1)
};

// Truncation control for infinite products and sums.
struct SeriesTolerance {
  double eps = 1e-14;     // absolute truncation tolerance
  int max_terms = 10000;  // >= 1
};

void validate(const HeineParams& p);
void validate(const DNormParams& p);

// (z;q)_j = prod_{i=0}^{j-1} (1 - z q^i); empty product for j = 0.
double qpoch_finite(double z, double q, int j);

// (z;q)_inf.  Truncates when |z q^i| drops below eps/10; throws
// NonConvergence if max_terms factors do not reach the tolerance.
double qpoch_inf(double z, double q, SeriesTolerance tol = {});

// log (z;q)_inf, valid when every factor 1 - z q^i is positive
// (in particular for all z <= 0, the case used by the Heine CGF).
double log_qpoch_inf(double z, double q, SeriesTolerance tol = {});

double heine_log_pmf(int j, const HeineParams& p, SeriesTolerance tol = {});
double heine_pmf(int j, const HeineParams& p, SeriesTolerance tol = {});

// Cumulant generating function log E e^{sX}:
//   F(s) = log(-theta e^s; q)_inf - log(-theta; q)_inf.
double heine_cgf(double s, const HeineParams& p, SeriesTolerance tol = {});

// E X = sum_{j>=0} theta q^j / (1 + theta q^j).
double heine_mean(const HeineParams& p, SeriesTolerance tol = {});

// Discrete normal pmf; the normalizer is summed symmetrically outward from
// the mode of the unnormalized weight, in log space.
double dnorm_log_pmf(long j, const DNormParams& p, SeriesTolerance tol = {});
double dnorm_pmf(long j, const DNormParams& p, SeriesTolerance tol = {});

}  // namespace coulomb::qdist
