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
#include <sstream>
#include <vector>

#include "doctest.h"
#include "mfgblind/blind_solver.h"
#include "mfgblind/errors.h"

using namespace mfgblind;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScalarField cosine(const TorusGrid& g, double amplitude = 1.0) {
  return ScalarField::from_function(
      g, [=](const Point& p) { return amplitude * std::cos(kTwoPi * p[0]); });
}

struct Instance {
  TorusGrid grid = build_grid(1, 64);
  TimeGrid tg = make_time_grid(1.0, 64);
  CostModel cm = CostModel::product_form(cosine(grid), cosine(grid));
  Hamiltonian h = Hamiltonian::smoothed_abs(0.1);
  DiffusionCoefficient sigma{0.1};
  SolverConfig cfg = [] {
    SolverConfig c;
    c.tol = 1e-8;
    c.max_iter = 400;
    return c;
  }();
};

double sup_gap(const ValuePath& a, const ValuePath& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.slices.size(); ++k) {
    e = std::max(e, sup_distance(a.slices[k].values(), b.slices[k].values()));
  }
  return e;
}

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig c;
  c.relaxation = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.relaxation = 1.5;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = SolverConfig{};
  c.tol = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = SolverConfig{};
  c.max_iter = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  CHECK(averaging_from_name("fictitious_play") == Averaging::kFictitiousPlay);
  CHECK(averaging_name(Averaging::kPicard) == "picard");
  CHECK_THROWS_AS(averaging_from_name("anderson"), InvalidArgument);
}

TEST_CASE("decoupled game converges in one iteration") {
  Instance in;
  const auto cm = CostModel::constant(cosine(in.grid));
  const auto sol = solve_complete_info(mollified_dirac(in.grid, {0.3, 0.0}), cm, in.h,
                                       in.sigma, in.tg, in.cfg);
  CHECK(sol.diagnostics.converged);
  CHECK(sol.diagnostics.iterations == 1);
  CHECK(equilibrium_gap(sol, cm, in.h, in.sigma, in.tg) == 0.0);
}

TEST_CASE("zero-cost game has zero gap") {
  Instance in;
  const auto cm = CostModel::constant(ScalarField(in.grid));
  const auto sol = solve_complete_info(uniform_density(in.grid), cm, Hamiltonian::abs(),
                                       in.sigma, in.tg, in.cfg);
  CHECK(equilibrium_gap(sol, cm, Hamiltonian::abs(), in.sigma, in.tg) == 0.0);
}

TEST_CASE("product form complete-information equilibrium") {
  Instance in;
  const auto sol = solve_complete_info(mollified_dirac(in.grid, {0.3, 0.0}), in.cm, in.h,
                                       in.sigma, in.tg, in.cfg);
  REQUIRE(sol.diagnostics.converged);
  CHECK(sol.diagnostics.final_gap < 1e-6);
  CHECK(sol.diagnostics.mass_error <= 1e-10);
  const auto& hist = sol.diagnostics.history;
  for (std::size_t i = hist.size() / 2; i + 1 < hist.size(); ++i) {
    CHECK(hist[i + 1].drift_gap <= hist[i].drift_gap * (1.0 + 1e-6));
  }
  CHECK(equilibrium_gap(sol, in.cm, in.h, in.sigma, in.tg) <= 10 * in.cfg.tol);
}

TEST_CASE("mirror symmetric data give symmetric solutions") {
  Instance in;
  const auto sol = solve_complete_info(mollified_dirac(in.grid, {0.0, 0.0}), in.cm, in.h,
                                       in.sigma, in.tg, in.cfg);
  REQUIRE(sol.diagnostics.converged);
  for (std::size_t k = 0; k < in.tg.nodes(); k += 8) {
    const auto& u = sol.value.slices[k];
    const auto& m = sol.belief.atoms[0].slices[k];
    for (int i = 1; i < 32; ++i) {
      CHECK(std::abs(u[in.grid.index(i)] - u[in.grid.index(-i)]) <= 1e-9);
      CHECK(std::abs(m[in.grid.index(i)] - m[in.grid.index(-i)]) <= 1e-9);
    }
  }
}

TEST_CASE("single-atom blind solve equals complete information") {
  Instance in;
  const auto m0 = mollified_dirac(in.grid, {0.3, 0.0});
  const auto full = solve_complete_info(m0, in.cm, in.h, in.sigma, in.tg, in.cfg);
  const auto blind = solve_blind(Belief::dirac(m0), in.cm, in.h, in.sigma, in.tg, in.cfg);
  CHECK(sup_gap(full.value, blind.value) <= 1e-10);
  CHECK(drift_distance(full.drift, blind.drift) <= 1e-10);
}

TEST_CASE("density-independent costs make the belief irrelevant") {
  Instance in;
  const auto cm = CostModel::constant(cosine(in.grid, 0.5));
  const auto a = solve_blind(Belief({0.5, 0.5}, {mollified_dirac(in.grid, {0.1, 0.0}),
                                                 mollified_dirac(in.grid, {0.6, 0.0})}),
                             cm, in.h, in.sigma, in.tg, in.cfg);
  const auto b = solve_complete_info(uniform_density(in.grid), cm, in.h, in.sigma, in.tg,
                                     in.cfg);
  CHECK(sup_gap(a.value, b.value) == 0.0);
}

TEST_CASE("two-atom product form equilibrium is unique across starts") {
  Instance in;
  const Belief mu({0.4, 0.6}, {mollified_dirac(in.grid, {0.2, 0.0}),
                               mollified_dirac(in.grid, {0.7, 0.0})});
  const auto a = solve_blind(mu, in.cm, in.h, in.sigma, in.tg, in.cfg);
  const auto b = solve_blind(mu, in.cm, in.h, in.sigma, in.tg, in.cfg,
                             constant_drift(VectorField(in.grid, 0.8), in.tg));
  REQUIRE(a.diagnostics.converged);
  REQUIRE(b.diagnostics.converged);
  CHECK(drift_distance(a.drift, b.drift) <= 10 * in.cfg.tol);
  CHECK(a.belief.weights == std::vector<double>{0.4, 0.6});
}

TEST_CASE("fictitious play reaches the same equilibrium") {
  Instance in;
  const Belief mu({0.4, 0.6}, {mollified_dirac(in.grid, {0.2, 0.0}),
                               mollified_dirac(in.grid, {0.7, 0.0})});
  auto cfg = in.cfg;
  cfg.averaging = Averaging::kFictitiousPlay;
  cfg.tol = 1e-3;
  cfg.max_iter = 2000;
  const auto fp = solve_blind(mu, in.cm, in.h, in.sigma, in.tg, cfg);
  const auto picard = solve_blind(mu, in.cm, in.h, in.sigma, in.tg, in.cfg);
  CHECK(fp.diagnostics.converged);
  CHECK(sup_gap(fp.value, picard.value) <= 1e-2);
}

TEST_CASE("perturbed drift is detected by the equilibrium gap") {
  Instance in;
  auto sol = solve_complete_info(mollified_dirac(in.grid, {0.3, 0.0}), in.cm, in.h,
                                 in.sigma, in.tg, in.cfg);
  auto& slice = sol.drift.slices[20];
  std::vector<double> shifted(slice.raw().begin(), slice.raw().end());
  for (auto& v : shifted) v += 0.1;
  slice = VectorField(in.grid, shifted);
  CHECK(equilibrium_gap(sol, in.cm, in.h, in.sigma, in.tg) >= 0.05);
}

TEST_CASE("non-convergence is reported, not thrown") {
  Instance in;
  auto cfg = in.cfg;
  cfg.max_iter = 1;
  const auto sol = solve_blind(Belief::dirac(mollified_dirac(in.grid, {0.3, 0.0})), in.cm,
                               in.h, in.sigma, in.tg, cfg);
  CHECK_FALSE(sol.diagnostics.converged);
  CHECK(sol.diagnostics.iterations == 1);
  CHECK(sol.diagnostics.history.size() == 1);
  std::ostringstream csv;
  write_history_csv(csv, sol.diagnostics);
  CHECK(csv.str().rfind("iter,drift_gap,value_change,wall_time\n", 0) == 0);
}

TEST_CASE("best response value checks") {
  Instance in;
  const auto path = push_forward(Belief::dirac(uniform_density(in.grid)),
                                 zero_drift(in.grid, in.tg), in.sigma, in.tg);
  const auto u = best_response_value(path, CostModel::constant(ScalarField(in.grid, 1.0)),
                                     in.h, in.sigma);
  CHECK(u.slices.front()[0] == doctest::Approx(1.0).epsilon(1e-12));
}
