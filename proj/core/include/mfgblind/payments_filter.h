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

#ifndef MFGBLIND_PAYMENTS_FILTER_H_
#define MFGBLIND_PAYMENTS_FILTER_H_

// Observed-payments model on atomic beliefs: consistency set membership,
// payment-based filtering, the tower identity and a receding-horizon
// simulator.

#include <cstddef>
#include <string>
#include <vector>

#include "mfgblind/belief.h"
#include "mfgblind/blind_solver.h"
#include "mfgblind/cost_model.h"
#include "mfgblind/hamiltonian.h"
#include "mfgblind/hjb_fp.h"

namespace mfgblind {

// An observed payment field g = f(m) on the whole torus.
struct PaymentSignature {
  ScalarField field;
  explicit PaymentSignature(ScalarField g);
};

enum class Grouping { kUnionFind, kExact };
Grouping grouping_from_name(const std::string& name);
std::string grouping_name(Grouping grouping);

struct FilterConfig {
  double tolerance = 1e-6;
  double observation_dt = 0.0;  // 0 observes at every solver step
  Grouping grouping = Grouping::kUnionFind;
  void validate(double solver_dt) const;
};

// Sup-norm distance between the payments of two densities.
double payment_distance(const CostModel& cm, const Density& a, const Density& b);

// True iff every pair of atoms has payments within tol in sup norm.
bool in_consistency_set(const Belief& mu, const CostModel& cm, double tol);

// Atom index groups sharing a payment. union_find links atoms within tol and
// takes connected components; exact groups atoms by payments quantized to
// tol-cells. Groups are listed by smallest member.
std::vector<std::vector<std::size_t>> partition_by_payment(const Belief& mu,
                                                          const CostModel& cm,
                                                          double tol,
                                                          Grouping grouping);

struct FilterResult {
  Belief belief;
  std::vector<std::size_t> kept;  // indices into the input belief
};

// Keeps the payment classes containing an atom within tol of the observation
// and renormalizes. Throws InconsistentObservation if nothing matches.
FilterResult filter_with_indices(const Belief& mu, const PaymentSignature& observed,
                                 const CostModel& cm, const FilterConfig& fc);
Belief filter_step(const Belief& mu, const PaymentSignature& observed,
                   const CostModel& cm, const FilterConfig& fc);

// |sum_i w_i E_{mu^i}[phi] - E_{mu_t}[phi]| where mu_t is the pushforward at
// time t and mu^i its filter on the payment of atom i.
double tower_check(const Belief& mu, const DriftField& drift,
                   DiffusionCoefficient sigma, const TimeGrid& tg, double t,
                   const CylinderFunctional& phi, const CostModel& cm,
                   const FilterConfig& fc = FilterConfig{});

struct EliminationEvent {
  double time = 0.0;
  int node = 0;
  std::vector<int> eliminated;  // original atom ids
};

struct FilterTrace {
  std::vector<double> times;
  std::vector<int> nodes;
  // Post-filter belief at each observation and the original ids of its atoms.
  std::vector<Belief> beliefs;
  std::vector<std::vector<int>> atom_ids;
  std::vector<PaymentSignature> observations;
  // Largest payment mismatch over the pre-filter atoms.
  std::vector<double> payment_sup_gap;
  std::vector<EliminationEvent> events;
  int true_atom = 0;
  std::size_t initial_atoms = 0;
  // Drift actually played and the true population's density on the full grid.
  DriftField realized_drift;
  DensityPath true_path;
  std::vector<int> solver_iterations;
  std::vector<bool> segment_converged;
  bool converged = true;
};

// Observation nodes: round(j * observation_dt / dt) for j = 0, 1, ...,
// deduplicated, capped at tg.steps; every node when observation_dt is 0.
std::vector<int> observation_nodes(const TimeGrid& tg, double observation_dt);

// Time grid of [t_k, T] with the same step as tg.
TimeGrid remaining_grid(const TimeGrid& tg, int k);

// Receding-horizon play: between observations every atom follows the current
// blind equilibrium drift; at each observation the belief is filtered on the
// true atom's payment and the blind game is re-solved on the remaining
// horizon, warm-started from the remaining plan.
FilterTrace simulate_observed(const Belief& mu0, int true_atom, const CostModel& cm,
                              const Hamiltonian& hamiltonian,
                              DiffusionCoefficient sigma, const TimeGrid& tg,
                              const FilterConfig& fc, const SolverConfig& cfg);

std::string trace_to_json(const FilterTrace& trace, int indent = 2);
// Columns: t, n_atoms, weight_0..weight_{K-1} (by original id), payment_sup_gap.
std::string trace_to_csv(const FilterTrace& trace);

struct ScenarioBundle {
  Belief mu0;
  CostModel cm;
  Hamiltonian hamiltonian;
  TimeGrid tg;
  double sigma = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

// Two Dirac populations at 0 and eps (bandwidth h) with weights p1, 1 - p1,
// the illustrative cost with strength c, H = |p|, T = 2, sigma = 0. The
// window is [1/4 - eps, 5/16 - eps].
ScenarioBundle illustrative_scenario(double eps, double p1, double c, int n,
                                     int time_steps);

}  // namespace mfgblind

#endif  // MFGBLIND_PAYMENTS_FILTER_H_
