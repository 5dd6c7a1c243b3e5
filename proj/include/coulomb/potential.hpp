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

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace coulomb::potential {

// A radial profile with closed-form derivatives up to fourth order.
class Profile {
 public:
  virtual ~Profile() = default;
  virtual double value(double r) const = 0;
  virtual double d1(double r) const = 0;
  virtual double d2(double r) const = 0;
  virtual double d3(double r) const = 0;
  virtual double d4(double r) const = 0;
  virtual std::string kind() const = 0;
  virtual nlohmann::json params() const = 0;
};

// Q(r) = coeff * r^2.
std::shared_ptr<const Profile> quadratic_profile(double coeff = 1.0);

// Q(r) = offset + 2 log r + (delta2 / (2 r^2)) (r^2 - rho2^2)^2.
// The quartic term vanishes to second order at r = rho2 where the
// normalized Laplacian equals delta2.
std::shared_ptr<const Profile> log_quartic_ring_profile(double rho2,
                                                        double delta2,
                                                        double offset = 1.0);

struct Window {
  double lo, hi;
  std::shared_ptr<const Profile> profile;
};

// Piecewise radial potential: finite on the windows, +infinity elsewhere.
// `inv_scale` multiplies every profile (Q = base / tau is inv_scale = 1/tau).
class RadialPotential {
 public:
  RadialPotential() = default;
  RadialPotential(std::vector<Window> windows, double scale_tau = 1.0);

  double value(double r) const;  // +infinity outside all windows
  double d1(double r) const;     // throws OutsideDomain outside
  double d2(double r) const;
  double d3(double r) const;
  double d4(double r) const;
  bool contains(double r) const;
  int window_index(double r) const;  // -1 if outside

  const std::vector<Window>& windows() const { return windows_; }
  double scale_tau() const { return scale_tau_; }

 private:
  std::vector<Window> windows_;  // disjoint, ordered
  double scale_tau_ = 1.0;       // Q = (sum of profiles) / scale_tau
};

struct DropletStructure {
  double tau_star = 1.0;
  std::vector<std::array<double, 2>> components;  // disjoint, increasing
  std::vector<double> masses;                     // sum to 1
  // convenience accessors for the two-component case
  double b0() const { return components.front()[1]; }
  double a1() const { return components.back()[0]; }
  double b1() const { return components.back()[1]; }
  bool has_gap() const { return components.size() >= 2; }
};

struct GapGeometry {
  double r1;        // capacity of the inner curve (radius b0)
  double r2;        // capacity of the outer curve (radius a1)
  double c;         // Dirichlet decomposition constant
  double tau_star;  // inner-component mass
  double delta1;    // Laplacian of Q on the inner curve
  double delta2;    // Laplacian of Q on the outer curve
};

struct ObstacleEvaluation {
  double r;
  double value;
  bool coincides;
};

// Normalized Laplacian (d dbar, so that the Laplacian of |z|^2 is 1):
// (1/4)(Q'' + Q'/r).  Throws OutsideDomain when r lies in no window.
double laplacian_radial(const RadialPotential& pot, double r);

// Mass of the centered disc of radius r when the density is positive up to
// r within its window: r Q'(r) / 2.
double mass_function(const RadialPotential& pot, double r);

// Solves the smooth-fit system for the two radii bounding the ring-shaped
// gap at inner mass tau_star:
//   b0 Q'(b0)/2 = tau_star,  a1 Q'(a1)/2 = tau_star,
//   Q(a1) - Q(b0) = 2 tau_star log(a1/b0),
// all residuals below 1e-10.  For tau_star = 1 the second radius is the
// tangency radius of the obstacle to the outer profile (zero-width ring).
struct GapRadii {
  double b0, a1;
};
GapRadii solve_gap_radii(const RadialPotential& pot, double tau_star);

// The inner-component mass for which the smooth-fit system is consistent
// (1 for an outpost potential); nullopt when the potential has no gap or
// outpost structure.
std::optional<double> gap_mass(const RadialPotential& pot);

DropletStructure droplet_structure(const RadialPotential& pot, double b0,
                                   double a1);

GapGeometry gap_constants(const RadialPotential& pot, double b0, double a1,
                          double tau_star);

ObstacleEvaluation obstacle_eval(const RadialPotential& pot, double tau,
                                 double r);

// Fractional part of n * tau_star.
double frac_part(long n, double tau_star);

// Builtins used throughout the tests and the CLI.
RadialPotential make_ginibre(double r_max = 3.0);
RadialPotential make_ginibre_outpost(double rho2 = 1.5, double delta2 = 4.0);
RadialPotential scaled(const RadialPotential& pot, double tau);

// JSON round trip: {"schema_version":1, "windows":[{"lo","hi","profile"}...],
// "scale_tau": tau}.  Profiles carry {"kind", ...params}.
nlohmann::json to_json(const RadialPotential& pot);
RadialPotential potential_from_json(const nlohmann::json& j);
RadialPotential load_potential(const std::string& path);
void save_potential(const RadialPotential& pot, const std::string& path);

}  // namespace coulomb::potential
