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

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "mfgblind/blind_solver.h"
#include "mfgblind/monotonicity.h"
#include "mfgblind/payments_filter.h"

using namespace mfgblind;

namespace {

ScalarField cosine(const TorusGrid& g) {
  return ScalarField::from_function(
      g, [](const Point& p) { return std::cos(2.0 * std::numbers::pi * p[0]); });
}

void BM_FpStep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto g = build_grid(dim, static_cast<int>(state.range(1)));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> b(g.size() * static_cast<std::size_t>(dim));
  for (auto& x : b) x = u(rng);
  const VectorField drift(g, b);
  std::vector<double> m(g.size(), 1.0);
  const double dt = 0.5 * g.h / dim;
  for (auto _ : state) {
    m = fp_step(m, drift, DiffusionCoefficient(0.1), dt);
    benchmark::DoNotOptimize(m.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_FpStep)->Args({1, 1024})->Args({2, 128});

void BM_HjbBackward(benchmark::State& state) {
  const auto g = build_grid(1, static_cast<int>(state.range(0)));
  const auto tg = make_time_grid(1.0, 2 * static_cast<int>(state.range(0)));
  const std::vector<ScalarField> running(tg.nodes(), cosine(g));
  const auto h = Hamiltonian::smoothed_abs(0.1);
  for (auto _ : state) {
    auto u = solve_hjb_backward(running, ScalarField(g), h, DiffusionCoefficient(0.1), tg);
    benchmark::DoNotOptimize(u.slices.data());
  }
}
BENCHMARK(BM_HjbBackward)->Arg(128)->Arg(256);

void BM_SolveBlind(benchmark::State& state) {
  const auto g = build_grid(1, 64);
  const auto tg = make_time_grid(1.0, 64);
  const auto cm = CostModel::product_form(cosine(g), cosine(g));
  std::vector<double> weights;
  std::vector<Density> atoms;
  for (int i = 0; i < state.range(0); ++i) {
    weights.push_back(1.0);
    atoms.push_back(mollified_dirac(g, {0.1 + 0.8 * i / static_cast<double>(state.range(0)), 0.0}));
  }
  const auto mu = Belief::normalized(weights, atoms);
  SolverConfig cfg;
  cfg.tol = 1e-8;
  for (auto _ : state) {
    auto sol = solve_blind(mu, cm, Hamiltonian::smoothed_abs(0.1), DiffusionCoefficient(0.1),
                           tg, cfg);
    benchmark::DoNotOptimize(sol.diagnostics.iterations);
  }
}
BENCHMARK(BM_SolveBlind)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Certify(benchmark::State& state) {
  const auto g = build_grid(1, 64);
  const auto cm = CostModel::moment_form(g, named_function("sqrt"));
  CertifyOptions opts;
  opts.witness_scan = false;
  for (auto _ : state) {
    auto rep = certify_blind_monotone(cm, 7, static_cast<int>(state.range(0)), opts);
    benchmark::DoNotOptimize(rep.min_over_trials);
  }
}
BENCHMARK(BM_Certify)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_IllustrativeScenario(benchmark::State& state) {
  const auto s = illustrative_scenario(0.1, 0.5, 0.5, 128, 256);
  SolverConfig cfg;
  cfg.relaxation = 1.0;
  cfg.tol = 1e-10;
  FilterConfig fc;
  fc.observation_dt = s.tg.horizon / 200.0;
  for (auto _ : state) {
    auto trace = simulate_observed(s.mu0, 1, s.cm, s.hamiltonian, DiffusionCoefficient(s.sigma),
                                   s.tg, fc, cfg);
    benchmark::DoNotOptimize(trace.events.size());
  }
}
BENCHMARK(BM_IllustrativeScenario)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
