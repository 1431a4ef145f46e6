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
#include <string>

#include "doctest.h"
#include "mfgblind/errors.h"
#include "mfgblind/torus_field.h"

using namespace mfgblind;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Density random_density(const TorusGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(g.size());
  for (auto& x : v) x = u(rng) * u(rng);
  return Density::normalized(g, std::move(v));
}

// Brute-force W1 on the circle: min over the cut position of the L1 of CDF
// differences, done by scanning every shift constant on a fine set.
double w1_bruteforce(const Density& a, const Density& b) {
  const auto& g = a.grid();
  std::vector<double> diff(g.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    acc += (a[i] - b[i]) * g.h;
    diff[i] = acc;
  }
  double best = 1e300;
  for (double c : diff) {
    double s = 0.0;
    for (double d : diff) s += std::abs(d - c) * g.h;
    best = std::min(best, s);
  }
  return best;
}

}  // namespace

TEST_CASE("build_grid spacing and node count") {
  const auto g1 = build_grid(1, 64);
  CHECK(g1.h == 0.015625);
  CHECK(g1.size() == 64);
  CHECK(build_grid(2, 16).size() == 256);
}

TEST_CASE("build_grid rejects unsupported dimensions") {
  CHECK_THROWS_WITH_AS(build_grid(3, 32), doctest::Contains("unsupported dimension"),
                       InvalidArgument);
  CHECK_THROWS_AS(build_grid(1, 4), InvalidArgument);
}

TEST_CASE("mollified dirac is unimodal with unit mass") {
  const auto g = build_grid(1, 64);
  const auto m = mollified_dirac(g, {0.5, 0.0});
  CHECK(std::abs(m.mass() - 1.0) <= 1e-12);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (m[i] > m[peak]) peak = i;
  }
  CHECK(peak == 32);
  for (std::size_t i = 1; i <= peak; ++i) CHECK(m[i] >= m[i - 1]);
  for (std::size_t i = peak + 1; i < g.size(); ++i) CHECK(m[i] <= m[i - 1]);
}

TEST_CASE("mollified dirac wraps around node 0") {
  const auto g = build_grid(1, 64);
  const auto m = mollified_dirac(g, {0.0, 0.0});
  for (int i = 1; i < 32; ++i) CHECK(m[g.index(i)] == doctest::Approx(m[g.index(-i)]).epsilon(1e-14));
}

TEST_CASE("mollified diracs half a turn apart are circular shifts") {
  const auto g = build_grid(1, 64);
  const auto a = mollified_dirac(g, {0.2, 0.0});
  const auto b = mollified_dirac(g, {0.7, 0.0});
  for (int i = 0; i < 64; ++i) {
    CHECK(std::abs(a[g.index(i)] - b[g.index(i + 32)]) <= 1e-12);
  }
}

TEST_CASE("mollified dirac in 2-D has unit mass") {
  const auto g = build_grid(2, 16);
  const auto m = mollified_dirac(g, {0.25, 0.75});
  CHECK(std::abs(m.mass() - 1.0) <= 1e-12);
}

TEST_CASE("mollified dirac rejects under-resolved bandwidth") {
  const auto g = build_grid(1, 64);
  CHECK_THROWS_AS(mollified_dirac(g, {0.1, 0.0}, g.h / 4), InvalidArgument);
}

TEST_CASE("integrate oracles") {
  const auto g = build_grid(1, 64);
  std::mt19937_64 rng(3);
  const auto m = random_density(g, rng);
  CHECK(integrate(ScalarField(g, 1.0), m) == doctest::Approx(1.0).epsilon(1e-12));

  const auto cosine =
      ScalarField::from_function(g, [](const Point& p) { return std::cos(kTwoPi * p[0]); });
  CHECK(std::abs(integrate(cosine, uniform_density(g))) <= 1e-12);

  const auto x = ScalarField::from_function(g, [](const Point& p) { return p[0]; });
  const auto d = mollified_dirac(g, {0.3, 0.0});
  double brute = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) brute += i * g.h * d[i] * g.h;
  CHECK(integrate(x, d) == doctest::Approx(brute).epsilon(1e-13));
  CHECK(std::abs(integrate(x, d) - 0.3) <= 2 * g.h);
}

TEST_CASE("laplacian annihilates constants") {
  const auto g = build_grid(2, 16);
  const auto lap = laplacian(ScalarField(g, 3.5));
  CHECK(lap.max() == 0.0);
  CHECK(lap.min() == 0.0);
}

TEST_CASE("laplacian of cosine is second order") {
  auto error = [](int n) {
    const auto g = build_grid(1, n);
    const auto f =
        ScalarField::from_function(g, [](const Point& p) { return std::cos(kTwoPi * p[0]); });
    const auto lap = laplacian(f);
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      e = std::max(e, std::abs(lap[i] + kTwoPi * kTwoPi * f[i]));
    }
    return e / (kTwoPi * kTwoPi);
  };
  CHECK(error(256) <= 1e-2);
  const double ratio = error(128) / error(256);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("wasserstein1 on the circle") {
  const auto g = build_grid(1, 128);
  const auto a = mollified_dirac(g, {0.2, 0.0});
  CHECK(wasserstein1_circle(a, a) == 0.0);
  CHECK(std::abs(wasserstein1_circle(a, mollified_dirac(g, {0.4, 0.0})) - 0.2) <= 2 * g.h);
  CHECK(std::abs(wasserstein1_circle(mollified_dirac(g, {0.1, 0.0}),
                                     mollified_dirac(g, {0.9, 0.0})) -
                 0.2) <= 2 * g.h);
}

TEST_CASE("wasserstein1 matches a brute-force oracle and is a metric") {
  const auto g = build_grid(1, 16);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_density(g, rng);
    const auto b = random_density(g, rng);
    const auto c = random_density(g, rng);
    const double ab = wasserstein1_circle(a, b);
    CHECK(ab == doctest::Approx(w1_bruteforce(a, b)).epsilon(1e-12));
    CHECK(ab == doctest::Approx(wasserstein1_circle(b, a)).epsilon(1e-12));
    CHECK(wasserstein1_circle(a, c) <= ab + wasserstein1_circle(b, c) + 1e-12);
  }
}

TEST_CASE("wasserstein1 is shift invariant for mollified diracs") {
  const auto g = build_grid(1, 128);
  for (double s : {0.1, 0.25, 0.4, 0.7}) {
    const auto a = mollified_dirac(g, {0.05, 0.0});
    const auto b = mollified_dirac(g, {0.05 + s, 0.0});
    INFO("shift ", s);
    CHECK(std::abs(wasserstein1_circle(a, b) - std::min(s, 1.0 - s)) <= 2 * g.h);
  }
}

TEST_CASE("density constructor checks") {
  const auto g = build_grid(1, 8);
  CHECK_THROWS_AS(Density(g, std::vector<double>(8, 2.0)), InvalidArgument);
  std::vector<double> v(8, 1.0);
  v[0] = -1.0;
  CHECK_THROWS_AS(Density::normalized(g, v), InvalidArgument);
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(7, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(8, std::nan(""))), InvalidArgument);
}

TEST_CASE("circle distance and circular mean") {
  CHECK(circle_distance(0.1, 0.9) == doctest::Approx(0.2));
  CHECK(circle_distance(0.25, 0.5) == doctest::Approx(0.25));
  const auto g = build_grid(1, 128);
  CHECK(circular_mean(mollified_dirac(g, {0.4, 0.0})) == doctest::Approx(0.4).epsilon(1e-9));
}
