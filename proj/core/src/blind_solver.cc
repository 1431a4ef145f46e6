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

#include "mfgblind/blind_solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include "mfgblind/errors.h"

namespace mfgblind {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double value_distance(const ValuePath& a, const ValuePath& b) {
  double best = 0.0;
  for (std::size_t k = 0; k < a.slices.size(); ++k) {
    best = std::max(best, sup_distance(a.slices[k].values(), b.slices[k].values()));
  }
  return best;
}

// Moves `current` towards `response` according to the averaging rule.
DriftField relax(const DriftField& current, const DriftField& response,
                 const SolverConfig& cfg, int iter) {
  const double weight = cfg.averaging == Averaging::kPicard
                            ? cfg.relaxation
                            : 1.0 / static_cast<double>(iter + 1);
  DriftField out{current.time_grid, {}};
  out.slices.reserve(current.slices.size());
  for (std::size_t k = 0; k < current.slices.size(); ++k) {
    const auto a = current.slices[k].raw();
    const auto b = response.slices[k].raw();
    std::vector<double> mixed(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      mixed[i] = (1.0 - weight) * a[i] + weight * b[i];
    }
    out.slices.emplace_back(current.slices[k].grid(), std::move(mixed));
  }
  return out;
}

double mass_error(const BeliefPath& path) {
  double worst = 0.0;
  for (const auto& atom : path.atoms) {
    for (const auto& m : atom.slices) worst = std::max(worst, std::abs(m.mass() - 1.0));
  }
  return worst;
}

void validate_drift(const DriftField& drift, const TimeGrid& tg, const TorusGrid& grid) {
  if (drift.slices.size() != tg.nodes()) {
    throw InvalidArgument("initial drift: wrong number of time slices");
  }
  for (const auto& s : drift.slices) {
    if (!(s.grid() == grid)) throw GridMismatch("initial drift: grid mismatch");
  }
}

// One application of the fixed-point map to a density path (complete
// information): costs f(m_t) node by node.
ValuePath best_response_to_path(const DensityPath& path, const CostModel& cm,
                                const Hamiltonian& hamiltonian,
                                DiffusionCoefficient sigma) {
  std::vector<ScalarField> running;
  running.reserve(path.slices.size());
  for (const auto& m : path.slices) running.push_back(cm.running(m));
  const ScalarField terminal = cm.terminal(path.slices.back());
  return solve_hjb_backward(running, terminal, hamiltonian, sigma, path.time_grid);
}

template <typename Path, typename Push, typename Respond>
EquilibriumSolution iterate(const TorusGrid& grid, const CostModel& cm,
                            const Hamiltonian& hamiltonian, const TimeGrid& tg,
                            const SolverConfig& cfg,
                            const std::optional<DriftField>& initial_drift,
                            Push push, Respond respond,
                            BeliefPath (*as_belief)(Path&&)) {
  cfg.validate();
  check_hjb_cfl(grid, tg.dt(), hamiltonian.lipschitz());
  DriftField drift = zero_drift(grid, tg);
  if (initial_drift) {
    validate_drift(*initial_drift, tg, grid);
    drift = *initial_drift;
  }
  const auto start = Clock::now();
  SolverDiagnostics diag;
  std::optional<ValuePath> previous;
  ValuePath value;
  DriftField response;
  // A density-independent game needs one best response only.
  const int max_iter = cm.independent_of_density() ? 1 : cfg.max_iter;
  for (int iter = 1; iter <= max_iter; ++iter) {
    Path path = push(drift);
    value = respond(path);
    response = optimal_drift(value, hamiltonian, &drift);
    const double gap = cm.independent_of_density() ? 0.0 : drift_distance(response, drift);
    IterationRecord rec;
    rec.iter = iter;
    rec.drift_gap = gap;
    rec.value_change = previous ? value_distance(value, *previous)
                                : std::numeric_limits<double>::infinity();
    rec.wall_time = seconds_since(start);
    diag.history.push_back(rec);
    diag.iterations = iter;
    diag.final_gap = gap;
    if (gap < cfg.tol) {
      diag.converged = true;
      break;
    }
    previous = value;
    drift = relax(drift, response, cfg, iter);
  }
  EquilibriumSolution sol;
  sol.value = std::move(value);
  sol.drift = std::move(response);
  sol.belief = as_belief(push(sol.drift));
  sol.diagnostics = std::move(diag);
  sol.diagnostics.mass_error = mass_error(sol.belief);
  return sol;
}

BeliefPath density_path_as_belief(DensityPath&& path) {
  BeliefPath out{path.time_grid, {1.0}, {}};
  out.atoms.push_back(std::move(path));
  return out;
}

BeliefPath belief_path_identity(BeliefPath&& path) { return std::move(path); }

}  // namespace

Averaging averaging_from_name(const std::string& name) {
  if (name == "picard") return Averaging::kPicard;
  if (name == "fictitious_play") return Averaging::kFictitiousPlay;
  throw InvalidArgument("unknown averaging '" + name + "'");
}

std::string averaging_name(Averaging averaging) {
  return averaging == Averaging::kPicard ? "picard" : "fictitious_play";
}

void SolverConfig::validate() const {
  if (!(relaxation > 0.0 && relaxation <= 1.0)) {
    throw InvalidArgument("solver.relaxation must lie in (0, 1]");
  }
  if (!(tol > 0.0)) throw InvalidArgument("solver.tol must be > 0");
  if (max_iter < 1) throw InvalidArgument("solver.max_iter must be >= 1");
}

double drift_distance(const DriftField& a, const DriftField& b) {
  if (a.slices.size() != b.slices.size()) {
    throw InvalidArgument("drift_distance: slice count mismatch");
  }
  double best = 0.0;
  for (std::size_t k = 0; k < a.slices.size(); ++k) {
    best = std::max(best, sup_distance(a.slices[k].raw(), b.slices[k].raw()));
  }
  return best;
}

ValuePath best_response_value(const BeliefPath& belief, const CostModel& cm,
                              const Hamiltonian& hamiltonian,
                              DiffusionCoefficient sigma) {
  std::vector<ScalarField> running;
  running.reserve(belief.nodes());
  for (std::size_t k = 0; k < belief.nodes(); ++k) {
    running.push_back(aggregate_running(belief.at(k), cm));
  }
  const ScalarField terminal = aggregate_terminal(belief.at(belief.nodes() - 1), cm);
  return solve_hjb_backward(running, terminal, hamiltonian, sigma, belief.time_grid);
}

EquilibriumSolution solve_complete_info(const Density& m0, const CostModel& cm,
                                        const Hamiltonian& hamiltonian,
                                        DiffusionCoefficient sigma, const TimeGrid& tg,
                                        const SolverConfig& cfg,
                                        const std::optional<DriftField>& initial_drift) {
  auto push = [&](const DriftField& b) { return solve_fp_forward(m0, b, sigma, tg); };
  auto respond = [&](const DensityPath& path) {
    return best_response_to_path(path, cm, hamiltonian, sigma);
  };
  EquilibriumSolution sol = iterate<DensityPath>(m0.grid(), cm, hamiltonian, tg, cfg,
                                                 initial_drift, push, respond,
                                                 &density_path_as_belief);
  const ValuePath check = best_response_to_path(sol.belief.atoms.front(), cm,
                                                hamiltonian, sigma);
  sol.diagnostics.hjb_residual = value_distance(sol.value, check);
  return sol;
}

EquilibriumSolution solve_blind(const Belief& mu0, const CostModel& cm,
                                const Hamiltonian& hamiltonian,
                                DiffusionCoefficient sigma, const TimeGrid& tg,
                                const SolverConfig& cfg,
                                const std::optional<DriftField>& initial_drift) {
  auto push = [&](const DriftField& b) { return push_forward(mu0, b, sigma, tg); };
  auto respond = [&](const BeliefPath& path) {
    return best_response_value(path, cm, hamiltonian, sigma);
  };
  EquilibriumSolution sol = iterate<BeliefPath>(mu0.grid(), cm, hamiltonian, tg, cfg,
                                                initial_drift, push, respond,
                                                &belief_path_identity);
  const ValuePath check = best_response_value(sol.belief, cm, hamiltonian, sigma);
  sol.diagnostics.hjb_residual = value_distance(sol.value, check);
  return sol;
}

double equilibrium_gap(const EquilibriumSolution& sol, const CostModel& cm,
                       const Hamiltonian& hamiltonian, DiffusionCoefficient sigma,
                       const TimeGrid& tg) {
  if (sol.belief.time_grid.steps != tg.steps) {
    throw InvalidArgument("equilibrium_gap: time grid mismatch");
  }
  const ValuePath u = best_response_value(sol.belief, cm, hamiltonian, sigma);
  return drift_distance(optimal_drift(u, hamiltonian, &sol.drift), sol.drift);
}

void write_history_csv(std::ostream& out, const SolverDiagnostics& diagnostics) {
  out << "iter,drift_gap,value_change,wall_time\n";
  out.precision(17);
  for (const auto& rec : diagnostics.history) {
    out << rec.iter << ',' << rec.drift_gap << ',' << rec.value_change << ','
        << rec.wall_time << '\n';
  }
}

}  // namespace mfgblind
