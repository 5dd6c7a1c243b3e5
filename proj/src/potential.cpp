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

#include "coulomb/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "coulomb/errors.hpp"
#include "coulomb/quadrature.hpp"

namespace coulomb::potential {

using nlohmann::json;

namespace {

class QuadraticProfile final : public Profile {
 public:
  explicit QuadraticProfile(double coeff) : coeff_(coeff) {}
  double value(double r) const override { return coeff_ * r * r; }
  double d1(double r) const override { return 2.0 * coeff_ * r; }
  double d2(double) const override { return 2.0 * coeff_; }
  double d3(double) const override { return 0.0; }
  double d4(double) const override { return 0.0; }
  std::string kind() const override { return "quadratic"; }
  json params() const override { return {{"coeff", coeff_}}; }

 private:
  double coeff_;
};

// offset + 2 log r + (delta2/2) u(r) with u(r) = (r^2 - rho2^2)^2 / r^2,
// expanded as u = r^2 - 2 p + p^2 / r^2 where p = rho2^2.  The quartic term
// vanishes to second order at r = rho2, where the normalized Laplacian of
// the profile equals delta2.
class LogQuarticRingProfile final : public Profile {
 public:
  LogQuarticRingProfile(double rho2, double delta2, double offset)
      : p_(rho2 * rho2), rho2_(rho2), delta2_(delta2), offset_(offset) {}

  double value(double r) const override {
    const double u = r * r - 2.0 * p_ + p_ * p_ / (r * r);
    return offset_ + 2.0 * std::log(r) + 0.5 * delta2_ * u;
  }
  double d1(double r) const override {
    const double u1 = 2.0 * r - 2.0 * p_ * p_ / (r * r * r);
    return 2.0 / r + 0.5 * delta2_ * u1;
  }
  double d2(double r) const override {
    const double r2 = r * r;
    const double u2 = 2.0 + 6.0 * p_ * p_ / (r2 * r2);
    return -2.0 / r2 + 0.5 * delta2_ * u2;
  }
  double d3(double r) const override {
    const double r2 = r * r;
    const double u3 = -24.0 * p_ * p_ / (r2 * r2 * r);
    return 4.0 / (r2 * r) + 0.5 * delta2_ * u3;
  }
  double d4(double r) const override {
    const double r2 = r * r;
    const double u4 = 120.0 * p_ * p_ / (r2 * r2 * r2);
    return -12.0 / (r2 * r2) + 0.5 * delta2_ * u4;
  }
  std::string kind() const override { return "log-plus-quartic-ring"; }
  json params() const override {
    return {{"rho2", rho2_}, {"delta2", delta2_}, {"offset", offset_}};
  }

 private:
  double p_, rho2_, delta2_, offset_;
};

}  // namespace

std::shared_ptr<const Profile> quadratic_profile(double coeff) {
  return std::make_shared<QuadraticProfile>(coeff);
}

std::shared_ptr<const Profile> log_quartic_ring_profile(double rho2,
                                                        double delta2,
                                                        double offset) {
  return std::make_shared<LogQuarticRingProfile>(rho2, delta2, offset);
}

RadialPotential::RadialPotential(std::vector<Window> windows, double scale_tau)
    : windows_(std::move(windows)), scale_tau_(scale_tau) {
  require(scale_tau_ > 0.0, "RadialPotential: scale_tau must be > 0");
  std::sort(windows_.begin(), windows_.end(),
            [](const Window& a, const Window& b) { return a.lo < b.lo; });
  for (size_t i = 0; i < windows_.size(); ++i) {
    require(windows_[i].lo < windows_[i].hi, "RadialPotential: empty window");
    require(windows_[i].lo >= 0.0, "RadialPotential: negative radius");
    if (i > 0)
      require(windows_[i].lo > windows_[i - 1].hi,
              "RadialPotential: overlapping windows");
  }
}

int RadialPotential::window_index(double r) const {
  for (size_t i = 0; i < windows_.size(); ++i)
    if (r >= windows_[i].lo && r <= windows_[i].hi)
      return static_cast<int>(i);
  return -1;
}

bool RadialPotential::contains(double r) const { return window_index(r) >= 0; }

double RadialPotential::value(double r) const {
  const int i = window_index(r);
  if (i < 0) return std::numeric_limits<double>::infinity();
  return windows_[i].profile->value(r) / scale_tau_;
}

double RadialPotential::d1(double r) const {
  const int i = window_index(r);
  if (i < 0) throw OutsideDomain("potential derivative outside windows");
  return windows_[i].profile->d1(r) / scale_tau_;
}

double RadialPotential::d2(double r) const {
  const int i = window_index(r);
  if (i < 0) throw OutsideDomain("potential derivative outside windows");
  return windows_[i].profile->d2(r) / scale_tau_;
}

double RadialPotential::d3(double r) const {
  const int i = window_index(r);
  if (i < 0) throw OutsideDomain("potential derivative outside windows");
  return windows_[i].profile->d3(r) / scale_tau_;
}

double RadialPotential::d4(double r) const {
  const int i = window_index(r);
  if (i < 0) throw OutsideDomain("potential derivative outside windows");
  return windows_[i].profile->d4(r) / scale_tau_;
}

double laplacian_radial(const RadialPotential& pot, double r) {
  if (!pot.contains(r)) throw OutsideDomain("laplacian_radial: r outside");
  return 0.25 * (pot.d2(r) + pot.d1(r) / r);
}

double mass_function(const RadialPotential& pot, double r) {
  return 0.5 * r * pot.d1(r);
}

namespace {

// Smallest root of mass_function = tau in [lo, hi], or nullopt.
std::optional<double> mass_root(const RadialPotential& pot, double lo,
                                double hi, double tau) {
  const int kScan = 512;
  double prev_r = lo;
  double prev_f = mass_function(pot, prev_r) - tau;
  if (std::abs(prev_f) < 1e-14) return prev_r;
  for (int i = 1; i <= kScan; ++i) {
    const double r = lo + (hi - lo) * i / kScan;
    const double f = mass_function(pot, r) - tau;
    if (prev_f * f <= 0.0) {
      return find_root(
          [&](double x) { return mass_function(pot, x) - tau; }, prev_r, r);
    }
    prev_r = r;
    prev_f = f;
  }
  return std::nullopt;
}

}  // namespace

GapRadii solve_gap_radii(const RadialPotential& pot, double tau_star) {
  require(tau_star > 0.0 && tau_star <= 1.0,
          "solve_gap_radii: tau_star must lie in (0,1]");
  const auto& wins = pot.windows();
  require(!wins.empty(), "solve_gap_radii: potential has no windows");

  const double eps = wins[0].lo > 0.0 ? 0.0 : 1e-9;
  auto b0 = mass_root(pot, wins[0].lo + eps, wins[0].hi, tau_star);
  if (!b0) throw NoGap("solve_gap_radii: no inner radius with the given mass");

  // Outer radius: smallest root of the same slope equation strictly beyond
  // b0, searched window by window.
  std::optional<double> a1;
  for (const auto& w : wins) {
    double lo = std::max(w.lo, *b0 * (1.0 + 1e-9));
    if (lo >= w.hi) continue;
    a1 = mass_root(pot, lo, w.hi, tau_star);
    if (a1) break;
  }
  if (!a1) throw NoGap("solve_gap_radii: no outer tangency radius found");

  const double res1 = mass_function(pot, *b0) / tau_star - 1.0;
  const double res2 = mass_function(pot, *a1) / tau_star - 1.0;
  const double res3 = pot.value(*a1) - pot.value(*b0) -
                      2.0 * tau_star * std::log(*a1 / *b0);
  if (std::abs(res1) > 1e-10 || std::abs(res2) > 1e-10)
    throw NotConverged("solve_gap_radii: slope residual above tolerance");
  if (std::abs(res3) > 1e-10)
    throw NoGap(
        "solve_gap_radii: obstacle value mismatch across the gap; the "
        "potential admits no gap at this mass");
  return {*b0, *a1};
}

DropletStructure droplet_structure(const RadialPotential& pot, double b0,
                                   double a1) {
  if (!(b0 <= a1))
    throw MassMismatch("droplet_structure: b0 > a1 (invalid ordering)");
  const auto& wins = pot.windows();
  DropletStructure d;

  auto component_mass = [&](double lo, double hi) {
    if (hi <= lo) return 0.0;
    return integrate(
        [&](double r) { return 2.0 * laplacian_radial(pot, r) * r; }, lo, hi,
        1e-12, 1e-13);
  };

  const double inner_lo = wins[0].lo;
  const double inner_mass = component_mass(inner_lo, b0);
  d.tau_star = mass_function(pot, b0);
  if (std::abs(inner_mass - d.tau_star) > 1e-8)
    throw MassMismatch("droplet_structure: inner quadrature mass mismatch");

  if (1.0 - d.tau_star < 1e-12) {
    // outpost: the ring has zero width
    d.components = {{inner_lo, b0}};
    d.masses = {inner_mass};
    return d;
  }

  // outer edge from the total-mass condition
  const int wi = pot.window_index(a1);
  if (wi < 0) throw OutsideDomain("droplet_structure: a1 outside windows");
  const double b1 = find_root(
      [&](double r) { return mass_function(pot, r) - 1.0; }, a1,
      wins[wi].hi);
  const double ring_mass = component_mass(a1, b1);
  if (std::abs(ring_mass - (1.0 - d.tau_star)) > 1e-8)
    throw MassMismatch("droplet_structure: ring quadrature mass mismatch");
  d.components = {{inner_lo, b0}, {a1, b1}};
  d.masses = {inner_mass, ring_mass};
  return d;
}

GapGeometry gap_constants(const RadialPotential& pot, double b0, double a1,
                          double tau_star) {
  GapGeometry g;
  g.r1 = b0;
  g.r2 = a1;
  g.tau_star = tau_star;
  g.delta1 = laplacian_radial(pot, b0);
  g.delta2 = laplacian_radial(pot, a1);
  if (g.delta1 <= 0.0 || g.delta2 <= 0.0)
    throw OutsideDomain("gap_constants: Laplacian not positive at a radius");
  g.c = 0.5 * std::log(g.delta2 / g.delta1);
  return g;
}

namespace {

struct GapSaturation {
  bool has_gap = false;
  double tau_c = 1.0;  // smooth-fit mass of the inner component
  double b0 = 0.0, a1 = 0.0;
};

// The mass at which the smooth-fit system becomes consistent.  The obstacle
// value mismatch across the candidate gap is a continuous function of the
// mass; its zero is the saturation mass tau_c.
GapSaturation gap_saturation(const RadialPotential& pot) {
  GapSaturation out;
  const auto& wins = pot.windows();
  if (wins.size() < 2) return out;
  const double eps = wins[0].lo > 0.0 ? 0.0 : 1e-9;

  auto value_gap = [&](double t) -> std::optional<double> {
    auto b = mass_root(pot, wins[0].lo + eps, wins[0].hi, t);
    if (!b) return std::nullopt;
    std::optional<double> a;
    for (const auto& w : wins) {
      const double lo = std::max(w.lo, *b * (1.0 + 1e-9));
      if (lo >= w.hi) continue;
      a = mass_root(pot, lo, w.hi, t);
      if (a) break;
    }
    if (!a) return std::nullopt;
    return pot.value(*a) - pot.value(*b) - 2.0 * t * std::log(*a / *b);
  };

  double prev_t = 0.0, prev_v = 0.0;
  bool have_prev = false;
  for (int i = 1; i <= 64; ++i) {
    const double t = i / 64.0;
    auto v = value_gap(t);
    if (!v) {
      have_prev = false;
      continue;
    }
    if (std::abs(*v) < 1e-11) {
      out.tau_c = t;
      out.has_gap = true;
      break;
    }
    if (have_prev && prev_v * *v < 0.0) {
      out.tau_c = find_root([&](double x) { return *value_gap(x); }, prev_t, t,
                            1e-15);
      out.has_gap = true;
      break;
    }
    prev_t = t;
    prev_v = *v;
    have_prev = true;
  }
  if (out.has_gap) {
    auto rad = solve_gap_radii(pot, out.tau_c);
    out.b0 = rad.b0;
    out.a1 = rad.a1;
  }
  return out;
}

}  // namespace

std::optional<double> gap_mass(const RadialPotential& pot) {
  const GapSaturation sat = gap_saturation(pot);
  if (sat.has_gap) return sat.tau_c;
  // an outpost potential: the tangency system is consistent at mass 1
  try {
    solve_gap_radii(pot, 1.0);
    return 1.0;
  } catch (const Error&) {
    return std::nullopt;
  }
}

ObstacleEvaluation obstacle_eval(const RadialPotential& pot, double tau,
                                 double r) {
  require(tau > 0.0 && tau <= 1.0, "obstacle_eval: tau must lie in (0,1]");
  if (r <= 0.0) throw OutsideDomain("obstacle_eval: r must be positive");
  const auto& wins = pot.windows();
  require(!wins.empty(), "obstacle_eval: empty potential");
  const double eps = wins[0].lo > 0.0 ? 0.0 : 1e-9;

  const GapSaturation sat = gap_saturation(pot);
  double value;
  if (!sat.has_gap || tau <= sat.tau_c + 1e-12) {
    // single inner disc of radius b0(tau)
    auto b0t = mass_root(pot, wins[0].lo + eps, wins[0].hi, tau);
    if (!b0t) throw OutsideDomain("obstacle_eval: no droplet at this mass");
    value = (r <= *b0t) ? pot.value(r)
                        : pot.value(*b0t) + 2.0 * tau * std::log(r / *b0t);
  } else {
    // two components: disc up to b0(tau_c), ring from a1 to b1(tau).
    // Across the gap the obstacle slope is the smooth-fit mass tau_c.
    const int wi = pot.window_index(sat.a1);
    const double b1t = find_root(
        [&](double rr) { return mass_function(pot, rr) - tau; }, sat.a1,
        wins[wi].hi);
    if (r <= sat.b0)
      value = pot.value(r);
    else if (r < sat.a1)
      value = pot.value(sat.b0) + 2.0 * sat.tau_c * std::log(r / sat.b0);
    else if (r <= b1t)
      value = pot.value(r);
    else
      value = pot.value(b1t) + 2.0 * tau * std::log(r / b1t);
  }

  ObstacleEvaluation ev;
  ev.r = r;
  ev.value = value;
  ev.coincides = pot.contains(r) && std::abs(pot.value(r) - value) < 1e-9;
  return ev;
}

double frac_part(long n, double tau_star) {
  const double x = static_cast<double>(n) * tau_star;
  return x - std::floor(x);
}

RadialPotential make_ginibre(double r_max) {
  return RadialPotential({{0.0, r_max, quadratic_profile(1.0)}});
}

RadialPotential make_ginibre_outpost(double rho2, double delta2) {
  // windows sized so the ring neighbourhood is well separated from the disc
  const double lo2 = 1.0 + 0.5 * (rho2 - 1.0);
  const double hi2 = rho2 + 0.8 * (rho2 - 1.0);
  return RadialPotential(
      {{0.0, 1.0 + 0.4 * (rho2 - 1.0), quadratic_profile(1.0)},
       {lo2, hi2, log_quartic_ring_profile(rho2, delta2, 1.0)}});
}

RadialPotential scaled(const RadialPotential& pot, double tau) {
  require(tau > 0.0, "scaled: tau must be > 0");
  return RadialPotential(pot.windows(), pot.scale_tau() * tau);
}

json to_json(const RadialPotential& pot) {
  json wins = json::array();
  for (const auto& w : pot.windows()) {
    json p = w.profile->params();
    p["kind"] = w.profile->kind();
    wins.push_back({{"lo", w.lo}, {"hi", w.hi}, {"profile", p}});
  }
  json j = {{"schema_version", 1}, {"windows", wins}};
  if (pot.scale_tau() != 1.0) j["scale_tau"] = pot.scale_tau();
  return j;
}

namespace {

std::shared_ptr<const Profile> profile_from_json(const json& p) {
  const std::string kind = p.at("kind").get<std::string>();
  if (kind == "quadratic")
    return quadratic_profile(p.value("coeff", 1.0));
  if (kind == "log-plus-quartic-ring")
    return log_quartic_ring_profile(p.at("rho2").get<double>(),
                                    p.at("delta2").get<double>(),
                                    p.value("offset", 1.0));
  throw DomainError("unknown profile kind: " + kind);
}

}  // namespace

RadialPotential potential_from_json(const json& j) {
  if (j.contains("kind") && j.at("kind") == "scaled") {
    RadialPotential base = potential_from_json(j.at("base"));
    return scaled(base, j.at("tau").get<double>());
  }
  std::vector<Window> wins;
  for (const auto& w : j.at("windows")) {
    wins.push_back({w.at("lo").get<double>(), w.at("hi").get<double>(),
                    profile_from_json(w.at("profile"))});
  }
  return RadialPotential(std::move(wins), j.value("scale_tau", 1.0));
}

RadialPotential load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open potential file: " + path);
  json j;
  in >> j;
  return potential_from_json(j);
}

void save_potential(const RadialPotential& pot, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write potential file: " + path);
  out << to_json(pot).dump(2) << '\n';
}

}  // namespace coulomb::potential
