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

#include "coulomb/qdist.hpp"

#include <cmath>
#include <limits>

#include "coulomb/errors.hpp"

namespace coulomb::qdist {

void validate(const HeineParams& p) {
  require(p.theta > 0.0, "HeineParams: theta must be > 0");
  require(p.q > 0.0 && p.q < 1.0, "HeineParams: q must lie in (0,1)");
}

void validate(const DNormParams& p) {
  require(p.theta > 0.0, "DNormParams: theta must be > 0");
  require(p.q > 0.0 && p.q < 1.0, "DNormParams: q must lie in (0,1)");
}

double qpoch_finite(double z, double q, int j) {
  require(j >= 0, "qpoch_finite: j must be >= 0");
  require(q > 0.0 && q < 1.0, "qpoch_finite: q must lie in (0,1)");
  double prod = 1.0;
  double zq = z;
  for (int i = 0; i < j; ++i) {
    prod *= 1.0 - zq;
    zq *= q;
  }
  return prod;
}

double qpoch_inf(double z, double q, SeriesTolerance tol) {
  require(q > 0.0 && q < 1.0, "qpoch_inf: q must lie in (0,1)");
  require(std::isfinite(z), "qpoch_inf: z must be finite");
  require(tol.eps > 0.0 && tol.max_terms >= 1, "qpoch_inf: bad tolerance");
  double prod = 1.0;
  double zq = z;
  const double cut = tol.eps / 10.0;
  for (int i = 0; i < tol.max_terms; ++i) {
    if (std::abs(zq) < cut) return prod;
    prod *= 1.0 - zq;
    zq *= q;
  }
  throw NonConvergence("qpoch_inf: max_terms reached before tolerance");
}

double log_qpoch_inf(double z, double q, SeriesTolerance tol) {
  require(q > 0.0 && q < 1.0, "log_qpoch_inf: q must lie in (0,1)");
  require(std::isfinite(z), "log_qpoch_inf: z must be finite");
  double sum = 0.0;
  double zq = z;
  const double cut = tol.eps / 10.0;
  for (int i = 0; i < tol.max_terms; ++i) {
    if (std::abs(zq) < cut) return sum;
    const double factor = 1.0 - zq;
    if (factor <= 0.0)
      throw DomainError("log_qpoch_inf: nonpositive factor 1 - z q^i");
    sum += std::log1p(-zq);
    zq *= q;
  }
  throw NonConvergence("log_qpoch_inf: max_terms reached before tolerance");
}

double heine_log_pmf(int j, const HeineParams& p, SeriesTolerance tol) {
  validate(p);
  require(j >= 0, "heine_log_pmf: j must be >= 0");
  const double lq = std::log(p.q);
  double log_qq_j = 0.0;  // log (q;q)_j, all factors in (0,1)
  double qi = p.q;
  for (int i = 0; i < j; ++i) {
    log_qq_j += std::log1p(-qi);
    qi *= p.q;
  }
  return 0.5 * static_cast<double>(j) * (j - 1) * lq +
         j * std::log(p.theta) - log_qq_j -
         log_qpoch_inf(-p.theta, p.q, tol);
}

double heine_pmf(int j, const HeineParams& p, SeriesTolerance tol) {
  return std::exp(heine_log_pmf(j, p, tol));
}

double heine_cgf(double s, const HeineParams& p, SeriesTolerance tol) {
  validate(p);
  require(std::isfinite(s), "heine_cgf: s must be finite");
  return log_qpoch_inf(-p.theta * std::exp(s), p.q, tol) -
         log_qpoch_inf(-p.theta, p.q, tol);
}

double heine_mean(const HeineParams& p, SeriesTolerance tol) {
  validate(p);
  double sum = 0.0;
  double tq = p.theta;
  for (int i = 0; i < tol.max_terms; ++i) {
    const double term = tq / (1.0 + tq);
    sum += term;
    if (term < tol.eps) return sum;
    tq *= p.q;
  }
  throw NonConvergence("heine_mean: max_terms reached before tolerance");
}

namespace {

inline double dnorm_log_weight(long j, const DNormParams& p) {
  return j * std::log(p.theta) +
         0.5 * static_cast<double>(j) * (j - 1) * std::log(p.q);
}

// log of the discrete-normal normalizer, summed symmetrically outward from
// the mode of the unnormalized weight.
double dnorm_log_z(const DNormParams& p, SeriesTolerance tol) {
  const long mode =
      std::lround(0.5 - std::log(p.theta) / std::log(p.q));
  const double lw0 = dnorm_log_weight(mode, p);
  double sum = 1.0;
  for (int k = 1; k < tol.max_terms; ++k) {
    const double up = std::exp(dnorm_log_weight(mode + k, p) - lw0);
    const double dn = std::exp(dnorm_log_weight(mode - k, p) - lw0);
    sum += up + dn;
    if (up + dn < tol.eps) return lw0 + std::log(sum);
  }
  throw NonConvergence("dnorm: normalizer did not converge");
}

}  // namespace

double dnorm_log_pmf(long j, const DNormParams& p, SeriesTolerance tol) {
  validate(p);
  return dnorm_log_weight(j, p) - dnorm_log_z(p, tol);
}

double dnorm_pmf(long j, const DNormParams& p, SeriesTolerance tol) {
  return std::exp(dnorm_log_pmf(j, p, tol));
}

}  // namespace coulomb::qdist
