// Copyright 2026 The mfgblind Authors
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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "mfgblind/belief.h"
#include "mfgblind/belief_io.h"
#include "mfgblind/errors.h"

using namespace mfgblind;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScalarField wave(const TorusGrid& g, double amplitude, double phase = 0.0) {
  return ScalarField::from_function(
      g, [=](const Point& p) { return amplitude * std::cos(kTwoPi * p[0] + phase); });
}

Belief two_diracs(const TorusGrid& g, double x, double y, double w) {
  return Belief({w, 1.0 - w}, {mollified_dirac(g, {x, 0.0}), mollified_dirac(g, {y, 0.0})});
}

}  // namespace

TEST_CASE("belief validation") {
  const auto g = build_grid(1, 32);
  const auto m = uniform_density(g);
  CHECK_THROWS_AS(Belief({0.5, 0.6}, {m, m}), InvalidArgument);
  CHECK_THROWS_AS(Belief({1.0}, {}), InvalidArgument);
  CHECK_THROWS_AS(Belief({-0.5, 1.5}, {m, m}), InvalidArgument);
  const auto other = uniform_density(build_grid(1, 16));
  CHECK_THROWS_AS(Belief({0.5, 0.5}, {m, other}), GridMismatch);
  const auto mu = Belief::normalized({2.0, 6.0}, {m, m});
  CHECK(mu.weight(0) == doctest::Approx(0.25));
  CHECK(Belief::dirac(m).size() == 1);
}

TEST_CASE("push_forward of a single atom is one fp solve") {
  const auto g = build_grid(1, 64);
  const auto tg = make_time_grid(1.0, 64);
  const auto drift = constant_drift(VectorField(g, 0.5), tg);
  const auto m0 = mollified_dirac(g, {0.3, 0.0});
  const auto path = push_forward(Belief::dirac(m0), drift, DiffusionCoefficient(0.1), tg);
  const auto direct = solve_fp_forward(m0, drift, DiffusionCoefficient(0.1), tg);
  for (std::size_t k = 0; k < tg.nodes(); ++k) {
    const auto a = path.atoms[0].slices[k].values();
    const auto b = direct.slices[k].values();
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST_CASE("push_forward transports diracs and keeps weights") {
  const auto g = build_grid(1, 200);
  const auto tg = make_time_grid(0.25, 50);
  const double eps = 0.1;
  const auto mu = Belief({0.3, 0.7}, {mollified_dirac(g, {0.0, 0.0}, g.h),
                                      mollified_dirac(g, {eps, 0.0}, g.h)});
  const auto path =
      push_forward(mu, constant_drift(VectorField(g, 1.0), tg), DiffusionCoefficient(0.0), tg);
  for (std::size_t k = 0; k < tg.nodes(); ++k) {
    const Belief b = path.at(k);
    CHECK(b.weight(0) == 0.3);
    CHECK(b.weight(1) == 0.7);
  }
  // dt = h: each step is an exact one-cell shift.
  const double t = tg.end();
  CHECK(circular_mean(path.atoms[0].slices.back()) == doctest::Approx(t).epsilon(1e-9));
  CHECK(circular_mean(path.atoms[1].slices.back()) == doctest::Approx(eps + t).epsilon(1e-9));
}

TEST_CASE("aggregate costs") {
  const auto g = build_grid(1, 32);
  const auto base = wave(g, 1.0);
  const auto phi = wave(g, 0.7, 0.3);
  const auto cm = CostModel::product_form(base, phi);
  const auto mu = two_diracs(g, 0.2, 0.6, 0.35);

  const auto single = aggregate_running(Belief::dirac(mu.atom(0)), cm);
  const auto direct = cm.running(mu.atom(0));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(single[i] == direct[i]);

  const auto agg = aggregate_running(mu, cm);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = 0.0;
    for (std::size_t a = 0; a < 2; ++a) {
      double integral = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) integral += phi[j] * mu.atom(a)[j] * g.h;
      s += mu.weight(a) * integral;
    }
    CHECK(agg[i] == doctest::Approx(base[i] + phi[i] * s).epsilon(1e-13));
  }

  const auto fixed = CostModel::constant(base);
  const auto one = aggregate_running(mu, fixed);
  const auto two = aggregate_running(two_diracs(g, 0.1, 0.9, 0.5), fixed);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(one[i] == doctest::Approx(two[i]).epsilon(1e-14));
}

TEST_CASE("aggregate terminal is linear in the belief") {
  const auto g = build_grid(1, 32);
  const auto cm = CostModel::product_form(ScalarField(g), wave(g, 1.0))
                      .with_terminal(
                          [](const Density& m) {
                            const auto& grid = m.grid();
                            const double s = integrate(wave(grid, 1.0), m);
                            return ScalarField(grid, s * s);
                          },
                          false);
  const auto zero = aggregate_terminal(two_diracs(g, 0.1, 0.4, 0.5),
                                       CostModel::product_form(ScalarField(g), wave(g, 1.0)));
  CHECK(zero.max() == 0.0);
  CHECK(zero.min() == 0.0);

  const auto a = mollified_dirac(g, {0.1, 0.0});
  const auto b = mollified_dirac(g, {0.45, 0.0});
  const auto c = mollified_dirac(g, {0.8, 0.0});
  const Belief mix({0.2, 0.3, 0.5}, {a, b, c});
  const auto lhs = aggregate_terminal(mix, cm);
  const double rhs = 0.2 * cm.terminal(a)[0] + 0.3 * cm.terminal(b)[0] + 0.5 * cm.terminal(c)[0];
  CHECK(lhs[0] == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("belief distance oracles") {
  const auto g = build_grid(1, 128);
  const auto mu = two_diracs(g, 0.1, 0.3, 0.5);
  CHECK(belief_distance(mu, mu) == doctest::Approx(0.0).epsilon(1e-14));
  const auto x = Belief::dirac(mollified_dirac(g, {0.15, 0.0}));
  const auto y = Belief::dirac(mollified_dirac(g, {0.85, 0.0}));
  CHECK(std::abs(belief_distance(x, y) - 0.3) <= 2 * g.h);
  const auto z = Belief::dirac(mollified_dirac(g, {0.2, 0.0}));
  CHECK(std::abs(belief_distance(mu, z) - 0.1) <= 2 * g.h);
}

TEST_CASE("belief holder modulus") {
  const auto g = build_grid(1, 128);
  const auto tg = make_time_grid(0.25, 32);
  const auto mu = two_diracs(g, 0.0, 0.1, 0.5);
  const auto still = push_forward(mu, zero_drift(g, tg), DiffusionCoefficient(0.0), tg);
  CHECK(belief_holder_modulus(still) == 0.0);

  const auto moving = push_forward(mu, constant_drift(VectorField(g, 1.0), tg),
                                   DiffusionCoefficient(0.0), tg);
  const double joint = belief_holder_modulus(moving);
  const double first = fp_holder_modulus(moving.atoms[0]);
  const double second = fp_holder_modulus(moving.atoms[1]);
  CHECK(joint == doctest::Approx(first).epsilon(1e-6));
  CHECK(joint <= std::max(first, second) + 1e-12);
}

TEST_CASE("cylinder functionals") {
  const auto g = build_grid(1, 32);
  const auto m = mollified_dirac(g, {0.25, 0.0});
  const auto inner = wave(g, 1.0);
  const double s = integrate(inner, m);
  const auto lin = CylinderFunctional::linear_decay(inner, 2.0);
  CHECK(lin.value(0.5, m) == doctest::Approx(1.5 * s));
  const auto quad = CylinderFunctional::quadratic_decay(inner, 2.0);
  CHECK(quad.value(0.5, m) == doctest::Approx(1.5 * s * s / 2));
  CHECK(CylinderFunctional::identity(inner).value(0.0, m) == doctest::Approx(s));
}

TEST_CASE("weak residual vanishes for psi = 0 and rejects non-vanishing tests") {
  const auto g = build_grid(1, 32);
  const auto tg = make_time_grid(1.0, 32);
  const auto mu = two_diracs(g, 0.2, 0.7, 0.5);
  const auto drift = constant_drift(VectorField(g, 0.3), tg);
  const auto path = push_forward(mu, drift, DiffusionCoefficient(0.05), tg);
  const auto zero = CylinderFunctional::linear_decay(ScalarField(g), 1.0);
  CHECK(weak_solution_residual(path, drift, DiffusionCoefficient(0.05), zero) == 0.0);
  CHECK_THROWS_AS(weak_solution_residual(path, drift, DiffusionCoefficient(0.05),
                                         CylinderFunctional::identity(wave(g, 1.0))),
                  InvalidArgument);
}

TEST_CASE("weak residual converges at first order in dt") {
  auto residual = [](int n, int steps, bool perturb) {
    const auto g = build_grid(1, n);
    const auto tg = make_time_grid(1.0, steps);
    const Belief mu({0.3, 0.7}, {mollified_dirac(g, {0.0, 0.0}, 0.08),
                                 mollified_dirac(g, {0.5, 0.0}, 0.08)});
    const auto drift = constant_drift(VectorField(g, 0.0), tg);
    const DiffusionCoefficient sigma(0.05);
    const auto path = push_forward(mu, drift, sigma, tg);
    const auto phi = CylinderFunctional::linear_decay(wave(g, 1.0), 1.0);
    auto slices = path.slices();
    if (perturb) {
      for (std::size_t k = tg.nodes() / 2; k < slices.size(); ++k) {
        slices[k] = Belief({0.2, 0.8}, slices[k].atoms());
      }
    }
    return weak_solution_residual(slices, tg, drift, sigma, phi);
  };
  const double r0 = residual(32, 32, false);
  const double r1 = residual(64, 128, false);
  const double r2 = residual(128, 512, false);
  CHECK(std::log(r0 / r1) / std::log(4.0) >= 0.8);
  CHECK(std::log(r1 / r2) / std::log(4.0) >= 0.8);
  CHECK(residual(128, 512, true) >= 10.0 * r2);
}

TEST_CASE("transport generator of a constant vanishes") {
  const auto g = build_grid(2, 16);
  const auto m = mollified_dirac(g, {0.3, 0.3});
  std::vector<double> b(2 * g.size(), 0.4);
  CHECK(transport_generator(ScalarField(g, 2.0), m, VectorField(g, b), 0.1) == 0.0);
}

TEST_CASE("belief json round trip") {
  const auto g = build_grid(1, 16);
  const auto mu = two_diracs(g, 0.2, 0.6, 0.25);
  const auto back = belief_from_json(belief_to_json(mu), g);
  REQUIRE(back.size() == 2);
  CHECK(back.weight(0) == mu.weight(0));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(back.atom(1)[i] == mu.atom(1)[i]);
  CHECK_THROWS_WITH_AS(belief_from_json(R"({"weights":[1],"atoms":[{"kind":"dirac"}]})", g),
                       doctest::Contains("belief.atoms[0].center"), InvalidArgument);
  CHECK_THROWS_WITH_AS(belief_from_json(R"({"weights":[1],"atoms":[],"x":1})", g),
                       doctest::Contains("belief.x"), InvalidArgument);
}
