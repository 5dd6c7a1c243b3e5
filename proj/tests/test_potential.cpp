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

#include <doctest.h>

#include <cmath>

#include "coulomb/errors.hpp"
#include "coulomb/potential.hpp"

using namespace coulomb;
using namespace coulomb::potential;

namespace {
const double kRho2 = 1.5, kDelta2 = 4.0;
}

namespace {

// Q(r) = r^4; the normalized Laplacian is 4 r^2.
class QuarticProfile final : public Profile {
 public:
  double value(double r) const override { return r * r * r * r; }
  double d1(double r) const override { return 4.0 * r * r * r; }
  double d2(double r) const override { return 12.0 * r * r; }
  double d3(double r) const override { return 24.0 * r; }
  double d4(double) const override { return 24.0; }
  std::string kind() const override { return "test-quartic"; }
  nlohmann::json params() const override { return {}; }
};

}  // namespace

TEST_CASE("normalized Laplacian") {
  auto gin = make_ginibre();
  CHECK(laplacian_radial(gin, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(laplacian_radial(gin, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  RadialPotential quartic({{0.0, 2.0, std::make_shared<QuarticProfile>()}});
  CHECK(laplacian_radial(quartic, 0.7) ==
        doctest::Approx(4.0 * 0.49).epsilon(1e-14));
  auto out = make_ginibre_outpost(kRho2, kDelta2);
  CHECK(laplacian_radial(out, kRho2) ==
        doctest::Approx(kDelta2).epsilon(1e-12));
  CHECK_THROWS_AS(laplacian_radial(out, 1.22), OutsideDomain);
}

TEST_CASE("profile derivatives agree with central differences") {
  auto out = scaled(make_ginibre_outpost(kRho2, kDelta2), 1.25);
  for (double r : {0.3, 0.7, 0.95, 1.1, 1.3, 1.45, 1.55, 1.7}) {
    if (!out.contains(r)) continue;
    const double h = r * 1e-6;
    const double d1_fd = (out.value(r + h) - out.value(r - h)) / (2.0 * h);
    const double d2_fd = (out.d1(r + h) - out.d1(r - h)) / (2.0 * h);
    const double d3_fd = (out.d2(r + h) - out.d2(r - h)) / (2.0 * h);
    const double d4_fd = (out.d3(r + h) - out.d3(r - h)) / (2.0 * h);
    CHECK(std::abs(out.d1(r) - d1_fd) < 1e-6 * std::max(1.0, std::abs(d1_fd)));
    CHECK(std::abs(out.d2(r) - d2_fd) < 1e-6 * std::max(1.0, std::abs(d2_fd)));
    CHECK(std::abs(out.d3(r) - d3_fd) < 1e-6 * std::max(1.0, std::abs(d3_fd)));
    CHECK(std::abs(out.d4(r) - d4_fd) < 1e-5 * std::max(1.0, std::abs(d4_fd)));
  }
}

TEST_CASE("gap radii: outpost and scaled potentials") {
  auto out = make_ginibre_outpost(kRho2, kDelta2);
  auto r1 = solve_gap_radii(out, 1.0);
  CHECK(r1.b0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r1.a1 == doctest::Approx(1.5).epsilon(1e-12));

  auto sc = scaled(out, 1.25);
  auto r2 = solve_gap_radii(sc, 0.8);
  CHECK(std::abs(mass_function(sc, r2.b0) - 0.8) < 1e-10);
  CHECK(std::abs(mass_function(sc, r2.a1) - 0.8) < 1e-10);
  CHECK(std::abs(sc.value(r2.a1) - sc.value(r2.b0) -
                 1.6 * std::log(r2.a1 / r2.b0)) < 1e-10);
  CHECK(r2.b0 <= 1.0 + 1e-9);
  CHECK(r2.a1 > 1.0);
  CHECK(r2.a1 < 1.65);

  CHECK_THROWS_AS(solve_gap_radii(make_ginibre(), 0.8), NoGap);
}

TEST_CASE("scaling invariance of the gap radii") {
  // replacing Q by Q/tau and tau* by tau* * tau gives the same equations
  auto base = scaled(make_ginibre_outpost(kRho2, kDelta2), 1.25);
  auto twice = scaled(base, 1.1);
  auto ra = solve_gap_radii(base, 0.8);
  auto rb = solve_gap_radii(twice, 0.8 / 1.1);
  CHECK(std::abs(ra.b0 - rb.b0) < 1e-9);
  CHECK(std::abs(ra.a1 - rb.a1) < 1e-9);
}

TEST_CASE("droplet structure and masses") {
  auto out = make_ginibre_outpost(kRho2, kDelta2);
  auto d1 = droplet_structure(out, 1.0, 1.5);
  REQUIRE(d1.components.size() == 1);
  CHECK(d1.components[0][0] == 0.0);
  CHECK(d1.components[0][1] == doctest::Approx(1.0));
  CHECK(d1.masses[0] == doctest::Approx(1.0).epsilon(1e-8));

  auto sc = scaled(out, 1.25);
  auto rad = solve_gap_radii(sc, 0.8);
  auto d2 = droplet_structure(sc, rad.b0, rad.a1);
  REQUIRE(d2.components.size() == 2);
  CHECK(std::abs(d2.masses[0] - 0.8) < 1e-8);
  CHECK(std::abs(d2.masses[1] - 0.2) < 1e-8);
  CHECK(std::abs(d2.masses[0] + d2.masses[1] - 1.0) < 1e-8);
  CHECK(d2.b1() > d2.a1());

  CHECK_THROWS_AS(droplet_structure(sc, 1.5, 1.0), MassMismatch);
}

TEST_CASE("gap constants and the Heine parameter pipeline") {
  auto out = make_ginibre_outpost(kRho2, kDelta2);
  auto g = gap_constants(out, 1.0, 1.5, 1.0);
  CHECK(g.c == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const double theta = (g.r1 / g.r2) * std::exp(-g.c);
  const double q = (g.r1 / g.r2) * (g.r1 / g.r2);
  CHECK(theta == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(q == doctest::Approx(4.0 / 9.0).epsilon(1e-12));

  // symmetric boundary data
  auto sym = make_ginibre_outpost(kRho2, 1.0);
  auto gs = gap_constants(sym, 1.0, solve_gap_radii(sym, 1.0).a1, 1.0);
  CHECK(std::abs(gs.c) < 1e-12);
}

TEST_CASE("obstacle evaluation") {
  auto out = make_ginibre_outpost(kRho2, kDelta2);
  // inside the droplet the obstacle coincides with the potential
  auto in = obstacle_eval(out, 1.0, 0.5);
  CHECK(in.value == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(in.coincides);
  // the outpost circle lies in the coincidence set
  auto on = obstacle_eval(out, 1.0, kRho2);
  CHECK(on.coincides);
  CHECK(on.value == doctest::Approx(1.0 + 2.0 * std::log(kRho2)));
  // strictly below the potential mid-gap
  auto mid = obstacle_eval(out, 1.0, 1.3);
  CHECK(mid.value < out.value(1.3));
  CHECK(!mid.coincides);
}

TEST_CASE("obstacle inequality on a radius grid") {
  auto sc = scaled(make_ginibre_outpost(kRho2, kDelta2), 1.25);
  for (double tau : {0.5, 0.8, 0.93, 1.0}) {
    for (int i = 0; i < 1000; ++i) {
      const double r = 1e-3 + i * (1.8 - 2e-3) / 999.0;
      if (!sc.contains(r)) continue;
      const auto ev = obstacle_eval(sc, tau, r);
      CHECK(ev.value <= sc.value(r) + 1e-9);
    }
  }
}

TEST_CASE("fractional part") {
  CHECK(frac_part(10, 0.8) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(frac_part(13, 0.8) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(frac_part(1, 1.0) == 0.0);
}

TEST_CASE("potential JSON round trip") {
  auto sc = scaled(make_ginibre_outpost(kRho2, kDelta2), 1.25);
  auto j = to_json(sc);
  auto back = potential_from_json(j);
  CHECK(to_json(back) == j);
  for (double r : {0.5, 1.1, 1.3, 1.55}) {
    if (!sc.contains(r)) {
      CHECK(!back.contains(r));
      continue;
    }
    CHECK(back.value(r) == sc.value(r));
    CHECK(back.d1(r) == sc.d1(r));
  }
}

TEST_CASE("gap mass detection") {
  CHECK(!gap_mass(make_ginibre()).has_value());
  auto out = make_ginibre_outpost(kRho2, kDelta2);
  auto m1 = gap_mass(out);
  REQUIRE(m1.has_value());
  CHECK(*m1 == doctest::Approx(1.0).epsilon(1e-10));
  auto m2 = gap_mass(scaled(out, 1.25));
  REQUIRE(m2.has_value());
  CHECK(*m2 == doctest::Approx(0.8).epsilon(1e-10));
}
