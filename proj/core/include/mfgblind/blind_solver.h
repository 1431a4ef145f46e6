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

#ifndef MFGBLIND_BLIND_SOLVER_H_
#define MFGBLIND_BLIND_SOLVER_H_

// Equilibria of the blind game (common prior over initial densities, no
// observations) and of the classical complete-information game, computed by
// damped iteration of  belief path -> HJB best response -> feedback drift ->
// pushed-forward belief path.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mfgblind/belief.h"
#include "mfgblind/cost_model.h"
#include "mfgblind/hamiltonian.h"
#include "mfgblind/hjb_fp.h"

namespace mfgblind {

enum class Averaging { kPicard, kFictitiousPlay };

Averaging averaging_from_name(const std::string& name);
std::string averaging_name(Averaging averaging);

struct SolverConfig {
  // Picard damping theta in (0, 1].
  double relaxation = 0.5;
  // Stop once the sup-norm drift change drops below tol.
  double tol = 1e-6;
  int max_iter = 500;
  Averaging averaging = Averaging::kPicard;

  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double drift_gap = 0.0;
  // sup |u_iter - u_{iter-1}|; +inf on the first iteration.
  double value_change = 0.0;
  double wall_time = 0.0;
};

struct SolverDiagnostics {
  int iterations = 0;
  bool converged = false;
  double final_gap = 0.0;
  // sup |u - best response to the returned belief path|.
  double hjb_residual = 0.0;
  // max |mass - 1| over atoms and slices.
  double mass_error = 0.0;
  std::vector<IterationRecord> history;
};

// drift == optimal_drift(value) and belief == push_forward(mu0, drift) hold
// exactly for every returned solution, converged or not.
struct EquilibriumSolution {
  ValuePath value;
  BeliefPath belief;
  DriftField drift;
  SolverDiagnostics diagnostics;
};

// Value function of the best response to a belief path (costs aggregated
// node by node, terminal cost from the last node).
ValuePath best_response_value(const BeliefPath& belief, const CostModel& cm,
                              const Hamiltonian& hamiltonian,
                              DiffusionCoefficient sigma);

EquilibriumSolution solve_complete_info(
    const Density& m0, const CostModel& cm, const Hamiltonian& hamiltonian,
    DiffusionCoefficient sigma, const TimeGrid& tg, const SolverConfig& cfg,
    const std::optional<DriftField>& initial_drift = std::nullopt);

EquilibriumSolution solve_blind(
    const Belief& mu0, const CostModel& cm, const Hamiltonian& hamiltonian,
    DiffusionCoefficient sigma, const TimeGrid& tg, const SolverConfig& cfg,
    const std::optional<DriftField>& initial_drift = std::nullopt);

// sup-norm distance between sol.drift and one fresh application of the
// fixed-point map to sol.belief.
double equilibrium_gap(const EquilibriumSolution& sol, const CostModel& cm,
                       const Hamiltonian& hamiltonian, DiffusionCoefficient sigma,
                       const TimeGrid& tg);

double drift_distance(const DriftField& a, const DriftField& b);

// CSV with header iter,drift_gap,value_change,wall_time.
void write_history_csv(std::ostream& out, const SolverDiagnostics& diagnostics);

}  // namespace mfgblind

#endif  // MFGBLIND_BLIND_SOLVER_H_
