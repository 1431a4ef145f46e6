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
#include "mfgblind/errors.h"
#include "mfgblind/hjb_fp.h"

using namespace mfgblind;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<ScalarField> constant_running(const ScalarField& f, const TimeGrid& tg) {
  return std::vector<ScalarField>(tg.nodes(), f);
}

ScalarField cosine(const TorusGrid& g, double amplitude = 1.0) {
  return ScalarField::from_function(
      g, [=](const Point& p) { return amplitude * std::cos(kTwoPi * p[0]); });
}

}  // namespace

TEST_CASE("hamiltonian catalogue") {
  const double zero[1] = {0.0};
  for (const auto& h : {Hamiltonian::abs(), Hamiltonian::smoothed_abs(0.1),
                        Hamiltonian::capped_quadratic(2.0)}) {
    CHECK(h.value(zero) == 0.0);
  }
  CHECK(Hamiltonian::abs().lipschitz() == 1.0);
  CHECK(Hamiltonian::smoothed_abs(0.1).lipschitz() == 1.0);
  CHECK(Hamiltonian::capped_quadratic(2.0).lipschitz() == 2.0);

  const double p[1] = {0.1};
  double out[1] = {0.0};
  Hamiltonian::smoothed_abs(0.1).gradient(p, out);
  CHECK(out[0] == doctest::Approx(0.1 / std::sqrt(0.02)).epsilon(1e-14));
  CHECK(Hamiltonian::smoothed_abs(0.1).value(p) ==
        doctest::Approx(std::sqrt(0.02) - 0.1).epsilon(1e-14));

  const double big[1] = {3.0};
  CHECK(Hamiltonian::capped_quadratic(2.0).value(big) == doctest::Approx(4.0));
  CHECK_THROWS_AS(Hamiltonian::from_name("quartic", 0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Hamiltonian::smoothed_abs(-1.0), InvalidArgument);
  CHECK_THROWS_AS(Hamiltonian::capped_quadratic(0.0), InvalidArgument);
  CHECK(Hamiltonian::abs().kinked_at_origin());
  CHECK_FALSE(Hamiltonian::smoothed_abs(0.1).kinked_at_origin());
}

TEST_CASE("hamiltonians are convex along random segments") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto& h : {Hamiltonian::abs(), Hamiltonian::smoothed_abs(0.2),
                        Hamiltonian::capped_quadratic(1.5)}) {
    for (int i = 0; i < 200; ++i) {
      const double a[2] = {u(rng), u(rng)};
      const double b[2] = {u(rng), u(rng)};
      const double mid[2] = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
      CHECK(h.value(mid) <= 0.5 * (h.value(a) + h.value(b)) + 1e-12);
    }
  }
}

TEST_CASE("godunov axis selection") {
  CHECK(godunov_axis(0.5, 0.7).side == -1);   // rising: backward slope
  CHECK(godunov_axis(-0.7, -0.5).side == 1);  // falling: forward slope
  const auto valley = godunov_axis(-0.3, 0.3);
  CHECK(valley.flat);
  CHECK(valley.p == 0.0);
  CHECK(godunov_axis(0.2, -0.5).side == 1);   // peak, steeper forward
}

TEST_CASE("hjb with constant data is exact") {
  const auto g = build_grid(1, 32);
  const auto tg = make_time_grid(1.0, 32);
  for (const auto& h : {Hamiltonian::abs(), Hamiltonian::smoothed_abs(0.1),
                        Hamiltonian::capped_quadratic(1.0)}) {
    const auto u = solve_hjb_backward(constant_running(ScalarField(g, 0.7), tg),
                                      ScalarField(g, 2.0), h, DiffusionCoefficient(0.1), tg);
    CHECK(u.slices.back().values()[0] == 2.0);
    for (int k = 0; k <= tg.steps; ++k) {
      const double expected = 2.0 + 0.7 * (tg.end() - tg.time(k));
      for (double v : u.slices[static_cast<std::size_t>(k)].values()) {
        CHECK(std::abs(v - expected) <= 1e-12);
      }
    }
  }
}

TEST_CASE("hjb eikonal front propagation") {
  // u(t, x) = max(dist(x, 1/2) - (T - t), 0) for pure transport with |p|.
  const auto g = build_grid(1, 128);
  const auto tg = make_time_grid(0.25, 64);
  const auto terminal = ScalarField::from_function(
      g, [](const Point& p) { return circle_distance(p[0], 0.5); });
  const auto u = solve_hjb_backward(constant_running(ScalarField(g), tg), terminal,
                                    Hamiltonian::abs(), DiffusionCoefficient(0.0), tg);
  for (int k : {0, 32}) {
    const double left = tg.end() - tg.time(k);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double exact =
          std::max(circle_distance(g.position(i)[0], 0.5) - left, 0.0);
      CHECK(std::abs(u.slices[static_cast<std::size_t>(k)][i] - exact) <= 2 * g.h);
    }
  }
}

TEST_CASE("hjb self-convergence under (h, dt) -> (h/2, dt/4)") {
  const auto h = Hamiltonian::capped_quadratic(1.0);
  auto solve = [&](int n, int steps) {
    const auto g = build_grid(1, n);
    const auto tg = make_time_grid(0.5, steps);
    return solve_hjb_backward(constant_running(cosine(g, 0.5), tg), cosine(g, 0.2), h,
                              DiffusionCoefficient(0.05), tg)
        .slices.front();
  };
  const auto reference = solve(512, 4096);
  auto error = [&](int n, int steps) {
    const auto u = solve(n, steps);
    const int stride = 512 / n;
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      e = std::max(e, std::abs(u[static_cast<std::size_t>(i)] -
                               reference[static_cast<std::size_t>(i * stride)]));
    }
    return e;
  };
  const double coarse = error(32, 16);
  const double fine = error(64, 64);
  CHECK(coarse / fine >= 1.5);
}

TEST_CASE("hjb rejects cfl violations") {
  const auto g = build_grid(1, 32);
  const auto tg = make_time_grid(1.0, 16);
  CHECK_THROWS_AS(solve_hjb_backward(constant_running(ScalarField(g), tg), ScalarField(g),
                                     Hamiltonian::abs(), DiffusionCoefficient(0.0), tg),
                  CflViolation);
}

TEST_CASE("optimal drift sign and closed forms") {
  const auto g = build_grid(1, 64);
  const auto tg = make_time_grid(1.0, 1);
  const ValuePath flat{tg, {ScalarField(g, 1.0), ScalarField(g, 1.0)}};
  const auto still = optimal_drift(flat, Hamiltonian::abs());
  for (double v : still.slices[0].raw()) CHECK(v == 0.0);

  const auto ramp = ScalarField::from_function(g, [](const Point& p) { return 0.1 * p[0]; });
  const ValuePath rising{tg, {ramp, ramp}};
  const auto abs_drift = optimal_drift(rising, Hamiltonian::abs());
  const auto smooth_drift = optimal_drift(rising, Hamiltonian::smoothed_abs(0.1));
  for (std::size_t i = 2; i < 62; ++i) {
    CHECK(abs_drift.slices[0].at(i, 0) == -1.0);
    CHECK(smooth_drift.slices[0].at(i, 0) == doctest::Approx(-0.1 / std::sqrt(0.02)));
  }
  CHECK(optimal_drift(rising, Hamiltonian::abs()).sup_norm() <= 1.0);
}

TEST_CASE("flat nodes keep the incumbent drift only for kinked hamiltonians") {
  const auto g = build_grid(1, 16);
  const ScalarField u(g, 0.0);
  const VectorField incumbent(g, 0.4);
  const auto kept = feedback_drift(u, Hamiltonian::abs(), &incumbent);
  for (double v : kept.raw()) CHECK(v == 0.4);
  const auto reset = feedback_drift(u, Hamiltonian::smoothed_abs(0.1), &incumbent);
  for (double v : reset.raw()) CHECK(v == 0.0);
}

TEST_CASE("fp keeps the uniform density stationary") {
  const auto g = build_grid(1, 32);
  const auto tg = make_time_grid(1.0, 32);
  const auto path = solve_fp_forward(uniform_density(g), zero_drift(g, tg),
                                     DiffusionCoefficient(0.2), tg);
  for (const auto& m : path.slices) {
    for (double v : m.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(fp_holder_modulus(path) <= 1e-12);
}

TEST_CASE("fp heat mode decays at the analytic rate") {
  const auto g = build_grid(1, 128);
  const double sigma = 0.05;
  const auto tg = make_time_grid(0.5, 500);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = 1.0 + 0.5 * std::cos(kTwoPi * i * g.h);
  const auto path = solve_fp_forward(Density(g, v), zero_drift(g, tg),
                                     DiffusionCoefficient(sigma), tg);
  const auto c = cosine(g);
  const double a0 = integrate(c, path.slices.front());
  const double a1 = integrate(c, path.slices.back());
  const double expected = std::exp(-kTwoPi * kTwoPi * sigma * tg.horizon);
  CHECK(std::abs(a1 / a0 - expected) <= 0.05 * expected);
}

TEST_CASE("fp pure transport moves the circular mean") {
  const auto g = build_grid(1, 128);
  const auto tg = make_time_grid(0.3, 96);
  const auto path = solve_fp_forward(mollified_dirac(g, {0.1, 0.0}),
                                     constant_drift(VectorField(g, 1.0), tg),
                                     DiffusionCoefficient(0.0), tg);
  CHECK(std::abs(circular_mean(path.slices.back()) - 0.4) <= 2 * g.h);
}

TEST_CASE("fp conserves mass and positivity under random drift in 2-D") {
  const auto g = build_grid(2, 16);
  const auto tg = make_time_grid(0.5, 32);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<VectorField> slices;
  for (std::size_t k = 0; k < tg.nodes(); ++k) {
    std::vector<double> c(2 * g.size());
    for (auto& x : c) x = u(rng);
    slices.emplace_back(g, std::move(c));
  }
  const auto path = solve_fp_forward(mollified_dirac(g, {0.3, 0.6}), DriftField{tg, slices},
                                     DiffusionCoefficient(0.02), tg);
  for (const auto& m : path.slices) {
    CHECK(std::abs(m.mass() - 1.0) <= 1e-10);
    for (double v : m.values()) CHECK(v >= 0.0);
  }
}

TEST_CASE("fp rejects cfl violations") {
  const auto g = build_grid(1, 32);
  const auto tg = make_time_grid(1.0, 16);
  CHECK_THROWS_AS(solve_fp_forward(uniform_density(g), constant_drift(VectorField(g, 1.0), tg),
                                   DiffusionCoefficient(0.0), tg),
                  CflViolation);
}

TEST_CASE("linear hjb step and fp step are adjoint") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int dim : {1, 2}) {
    const auto g = build_grid(dim, 16);
    const double dt = 0.5 * g.h / dim;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> phi(g.size());
      std::vector<double> m(g.size());
      std::vector<double> b(g.size() * static_cast<std::size_t>(dim));
      for (auto& x : phi) x = u(rng);
      for (auto& x : m) x = u(rng) + 1.0;
      for (auto& x : b) x = u(rng);
      const VectorField drift(g, b);
      const DiffusionCoefficient sigma(0.1 * (u(rng) + 1.0));
      const double lhs = dot(linear_hjb_step(phi, drift, sigma, dt), m);
      const double rhs = dot(phi, fp_step(m, drift, sigma, dt));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("holder modulus is stable under dt refinement") {
  const auto g = build_grid(1, 128);
  auto modulus = [&](int steps) {
    const auto tg = make_time_grid(1.0, steps);
    return fp_holder_modulus(solve_fp_forward(mollified_dirac(g, {0.5, 0.0}),
                                              zero_drift(g, tg), DiffusionCoefficient(0.05),
                                              tg));
  };
  const double a = modulus(128);
  const double b = modulus(256);
  const double c = modulus(512);
  CHECK(std::isfinite(a));
  CHECK(a > 0.0);
  CHECK(std::abs(b - a) <= 0.2 * a);
  CHECK(std::abs(c - a) <= 0.2 * a);
}

TEST_CASE("time grid and diffusion validation") {
  CHECK_THROWS_AS(make_time_grid(0.0, 4), InvalidArgument);
  CHECK_THROWS_AS(make_time_grid(1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(DiffusionCoefficient(-0.1), InvalidArgument);
  const auto tg = make_time_grid(2.0, 8, 0.5);
  CHECK(tg.dt() == 0.25);
  CHECK(tg.end() == 2.5);
  CHECK(tg.nodes() == 9);
}
