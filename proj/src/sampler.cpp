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

#include "coulomb/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include "coulomb/errors.hpp"
#include "coulomb/quadrature.hpp"
#include "coulomb/rng.hpp"

namespace coulomb::sampler {

namespace {

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& f) {
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += threads) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Fritsch-Carlson monotone slopes for nodes (x, y) with x strictly
// increasing and y strictly increasing.
std::vector<double> pchip_slopes(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> delta(n - 1);
  for (size_t i = 0; i + 1 < n; ++i)
    delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  d[0] = delta[0];
  d[n - 1] = delta[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
      const double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  return d;
}

}  // namespace

double InverseCdf::sample(double u) const {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.begin()) return radius.front();
  if (it == cdf.end()) return radius.back();
  const size_t i = static_cast<size_t>(it - cdf.begin()) - 1;
  const double h = cdf[i + 1] - cdf[i];
  const double t = (u - cdf[i]) / h;
  const double y0 = radius[i], y1 = radius[i + 1];
  const double m0 = slope[i] * h, m1 = slope[i + 1] * h;
  const double t2 = t * t, t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 +
         (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
}

namespace {

// Tabulate the inverse CDF of the index-j modulus law.  The density is
// exp(g) with g = (2j+1) log r - n Q + s omega; the support is clipped to
// where g stays within 60 log-units of its peak.
InverseCdf build_table(const PerturbedWeight& w, long j, long n,
                       int table_points) {
  const auto& wins = w.pot.windows();
  const double inv_tau = 1.0 / w.pot.scale_tau();
  struct Piece {
    double lo, hi, gmax;
    const potential::Window* win;
  };
  std::vector<Piece> pieces;
  double gmax_all = -HUGE_VAL;
  for (const auto& win : wins) {
    const double lo = std::max(win.lo, 1e-12);
    auto g = [&](double r) {
      return (2.0 * j + 1.0) * std::log(r) -
             n * win.profile->value(r) * inv_tau + w.s * w.omega(r);
    };
    auto [peak, gm] = maximize(g, lo, win.hi);
    (void)peak;
    pieces.push_back({lo, win.hi, gm, &win});
    gmax_all = std::max(gmax_all, gm);
  }
  // clip each window to the region with g - gmax_all > -60
  const double cut = gmax_all - 60.0;
  std::vector<std::pair<double, double>> support;
  for (auto& p : pieces) {
    auto g = [&](double r) {
      return (2.0 * j + 1.0) * std::log(r) -
             n * p.win->profile->value(r) * inv_tau + w.s * w.omega(r);
    };
    if (p.gmax <= cut) continue;
    // scan for the sub-interval above the cut
    const int kScan = 512;
    double lo = p.hi, hi = p.lo;
    double prev_r = p.lo;
    double prev_above = g(prev_r) > cut;
    if (prev_above) lo = p.lo;
    for (int i = 1; i <= kScan; ++i) {
      const double r = p.lo + (p.hi - p.lo) * i / kScan;
      const bool above = g(r) > cut;
      if (above && !prev_above)
        lo = find_root([&](double x) { return g(x) - cut; }, prev_r, r);
      if (!above && prev_above)
        hi = find_root([&](double x) { return g(x) - cut; }, prev_r, r);
      prev_r = r;
      prev_above = above;
    }
    if (prev_above) hi = p.hi;
    if (hi > lo) support.emplace_back(lo, hi);
  }
  if (support.empty())
    throw QuadratureFailure("build_sampler: empty support for an index");

  double total_len = 0.0;
  for (auto& s : support) total_len += s.second - s.first;

  // Per-cell Simpson masses of exp(g - gmax_all) on a grid allocated
  // proportionally to interval length.
  std::vector<double> rs, masses;
  rs.reserve(table_points + 8);
  masses.reserve(table_points + 8);
  for (auto& s : support) {
    int pts = std::max(
        16, static_cast<int>(table_points * (s.second - s.first) / total_len));
    auto g = [&](double r) {
      const double q = w.pot.value(r);
      return (2.0 * j + 1.0) * std::log(r) - n * q + w.s * w.omega(r);
    };
    const double h = (s.second - s.first) / pts;
    if (!rs.empty()) masses.push_back(0.0);  // no mass between intervals
    if (rs.empty() || rs.back() != s.first) rs.push_back(s.first);
    for (int i = 0; i < pts; ++i) {
      const double r0 = s.first + i * h;
      const double r1 = r0 + h;
      const double f0 = std::exp(g(r0) - gmax_all);
      const double fm = std::exp(g(0.5 * (r0 + r1)) - gmax_all);
      const double f1 = std::exp(g(r1) - gmax_all);
      masses.push_back(h / 6.0 * (f0 + 4.0 * fm + f1));
      rs.push_back(r1);
    }
  }
  // cumulative, normalized, deduplicated to keep the CDF strictly increasing
  std::vector<double> cdf(rs.size(), 0.0);
  for (size_t i = 1; i < rs.size(); ++i) cdf[i] = cdf[i - 1] + masses[i - 1];
  const double z = cdf.back();
  if (!(z > 0.0)) throw QuadratureFailure("build_sampler: zero total mass");
  for (auto& v : cdf) v /= z;
  InverseCdf out;
  out.cdf.push_back(cdf[0]);
  out.radius.push_back(rs[0]);
  for (size_t i = 1; i < rs.size(); ++i) {
    if (cdf[i] > out.cdf.back() + 1e-15) {
      out.cdf.push_back(cdf[i]);
      out.radius.push_back(rs[i]);
    }
  }
  out.cdf.front() = 0.0;
  out.cdf.back() = 1.0;
  out.slope = pchip_slopes(out.cdf, out.radius);
  return out;
}

}  // namespace

ModuliSampler build_sampler(const PerturbedWeight& w, long n, int table_points,
                            std::uint64_t seed, int threads) {
  require(n >= 1, "build_sampler: n must be >= 1");
  require(table_points >= 64, "build_sampler: table too small");
  ModuliSampler ms;
  ms.n = n;
  ms.seed = seed;
  ms.tables.resize(n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t j) {
    ms.tables[j] = build_table(w, static_cast<long>(j), n, table_points);
  });
  ms.support_lo = HUGE_VAL;
  ms.support_hi = -HUGE_VAL;
  for (const auto& t : ms.tables) {
    ms.support_lo = std::min(ms.support_lo, t.radius.front());
    ms.support_hi = std::max(ms.support_hi, t.radius.back());
  }
  return ms;
}

SampleBatch sample_counts(const ModuliSampler& ms, double threshold,
                          std::size_t replicas, int threads) {
  SampleBatch b;
  b.n = ms.n;
  b.seed = ms.seed;
  b.replicas = replicas;
  b.counts.assign(replicas, 0);
  b.replica_keys.assign(replicas, 0);
  parallel_for(replicas, threads, [&](std::size_t rep) {
    rng::Stream stream(ms.seed, rep);
    b.replica_keys[rep] = stream.key();
    long count = 0;
    for (long j = 0; j < ms.n; ++j) {
      const double r = ms.tables[j].sample(stream.next_double());
      if (r >= threshold) ++count;
    }
    b.counts[rep] = count;
  });
  return b;
}

SampleBatch sample_linear_stat(const ModuliSampler& ms,
                               const std::function<double(double)>& f,
                               double sigma_f, std::size_t replicas,
                               int threads) {
  SampleBatch b;
  b.n = ms.n;
  b.seed = ms.seed;
  b.replicas = replicas;
  b.lin_stats.assign(replicas, 0.0);
  b.replica_keys.assign(replicas, 0);
  parallel_for(replicas, threads, [&](std::size_t rep) {
    rng::Stream stream(ms.seed, rep);
    b.replica_keys[rep] = stream.key();
    std::vector<double> vals(ms.n);
    for (long j = 0; j < ms.n; ++j)
      vals[j] = f(ms.tables[j].sample(stream.next_double()));
    b.lin_stats[rep] = pairwise_sum(vals) - ms.n * sigma_f;
  });
  return b;
}

void sample_joint(const ModuliSampler& ms, double threshold,
                  std::size_t replicas,
                  const std::vector<std::function<double(double)>>& fs,
                  const std::vector<double>& sigma_fs, SampleBatch& counts_out,
                  std::vector<std::vector<double>>& stats_out, int threads) {
  require(fs.size() == sigma_fs.size(), "sample_joint: mismatched statistics");
  counts_out = SampleBatch{};
  counts_out.n = ms.n;
  counts_out.seed = ms.seed;
  counts_out.replicas = replicas;
  counts_out.counts.assign(replicas, 0);
  counts_out.replica_keys.assign(replicas, 0);
  stats_out.assign(fs.size(), std::vector<double>(replicas, 0.0));
  parallel_for(replicas, threads, [&](std::size_t rep) {
    rng::Stream stream(ms.seed, rep);
    counts_out.replica_keys[rep] = stream.key();
    long count = 0;
    std::vector<std::vector<double>> vals(fs.size(),
                                          std::vector<double>(ms.n));
    for (long j = 0; j < ms.n; ++j) {
      const double r = ms.tables[j].sample(stream.next_double());
      if (r >= threshold) ++count;
      for (size_t q = 0; q < fs.size(); ++q) vals[q][j] = fs[q](r);
    }
    counts_out.counts[rep] = count;
    for (size_t q = 0; q < fs.size(); ++q)
      stats_out[q][rep] = pairwise_sum(vals[q]) - ms.n * sigma_fs[q];
  });
}

double empirical_tv(const std::vector<long>& values,
                    const std::function<double(long)>& model_pmf, long offset,
                    long model_lo, long model_hi) {
  require(!values.empty(), "empirical_tv: empty batch");
  long lo = *std::min_element(values.begin(), values.end()) + offset;
  long hi = *std::max_element(values.begin(), values.end()) + offset;
  lo = std::min(lo, model_lo);
  hi = std::max(hi, model_hi);
  const double inv = 1.0 / static_cast<double>(values.size());
  std::vector<double> emp(static_cast<size_t>(hi - lo + 1), 0.0);
  for (long v : values) emp[static_cast<size_t>(v + offset - lo)] += inv;
  double tv = 0.0;
  for (long k = lo; k <= hi; ++k)
    tv += std::abs(emp[static_cast<size_t>(k - lo)] - model_pmf(k));
  return 0.5 * tv;
}

void write_batch_csv(const SampleBatch& b, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("write_batch_csv: cannot open " + path);
  out.precision(17);
  out << "replica,count,lin_stat\n";
  for (std::size_t i = 0; i < b.replicas; ++i) {
    out << i << ',';
    if (i < b.counts.size()) out << b.counts[i];
    out << ',';
    if (i < b.lin_stats.size()) out << b.lin_stats[i];
    out << '\n';
  }
}

}  // namespace coulomb::sampler
