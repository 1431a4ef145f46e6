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

#ifndef MFGBLIND_BELIEF_H_
#define MFGBLIND_BELIEF_H_

// Finitely supported beliefs over densities, their transport along a common
// Fokker-Planck flow, lifted costs, the W1-over-W1 metric and the weak form
// of the belief continuity equation.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mfgblind/cost_model.h"
#include "mfgblind/hjb_fp.h"
#include "mfgblind/torus_field.h"

namespace mfgblind {

class Belief {
 public:
  static constexpr std::size_t kMaxAtoms = 64;
  static constexpr double kWeightTolerance = 1e-12;

  // Weights must be positive and sum to 1; atoms share one grid.
  Belief(std::vector<double> weights, std::vector<Density> atoms);

  static Belief dirac(Density m);
  // Rescales positive weights to sum to 1.
  static Belief normalized(std::vector<double> weights, std::vector<Density> atoms);

  std::size_t size() const { return atoms_.size(); }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<Density>& atoms() const { return atoms_; }
  const Density& atom(std::size_t i) const { return atoms_[i]; }
  const TorusGrid& grid() const { return atoms_.front().grid(); }

 private:
  std::vector<double> weights_;
  std::vector<Density> atoms_;
};

// Atom i at node k is K_{t_k}(m_i); weights never change along the path.
struct BeliefPath {
  TimeGrid time_grid;
  std::vector<double> weights;
  std::vector<DensityPath> atoms;

  std::size_t nodes() const { return time_grid.nodes(); }
  Belief at(std::size_t k) const;
  std::vector<Belief> slices() const;
};

// phi(t, mu) = sum_i w_i psi(t, int(h dm_i)). The flat derivative is
// psi_s(t, int(h dm)) (h(x) - int(h dm)), so its x-derivatives only involve
// psi_s and the derivatives of h.
struct CylinderFunctional {
  ScalarField inner;
  std::function<double(double, double)> outer;
  std::function<double(double, double)> outer_dt;
  std::function<double(double, double)> outer_ds;

  // psi(t, s) = (T - t) s.
  static CylinderFunctional linear_decay(ScalarField inner, double horizon_end);
  // psi(t, s) = s.
  static CylinderFunctional identity(ScalarField inner);
  // psi(t, s) = (T - t) s^2 / 2.
  static CylinderFunctional quadratic_decay(ScalarField inner, double horizon_end);

  double value(double t, const Density& m) const;
  double value(double t, const Belief& mu) const;
};

BeliefPath push_forward(const Belief& mu0, const DriftField& drift,
                        DiffusionCoefficient sigma, const TimeGrid& tg);

// x -> sum_i w_i f(m_i)(x).
ScalarField aggregate_running(const Belief& mu, const CostModel& cm);
// x -> sum_i w_i U0(m_i)(x).
ScalarField aggregate_terminal(const Belief& mu, const CostModel& cm);

// Exact W1 between two atomic beliefs with ground cost
// wasserstein1_circle. 1-D only.
double belief_distance(const Belief& mu, const Belief& nu);

// max over sampled node pairs of belief_distance / sqrt(|t - s|). 1-D only.
double belief_holder_modulus(const BeliefPath& path, int samples = 32);

// int((sigma Lap_h h + b . grad_b h) dm), where grad_b takes the one-sided
// difference in the direction of b. This is the generator of the FP scheme
// acting on the linear functional m -> int(h dm).
double transport_generator(const ScalarField& h, const Density& m,
                           const VectorField& drift, double sigma);

// |sum_k dt sum_i w_i(t_k) [-psi_t - psi_s G_i(t_k)] - sum_i w_i(0) psi(0, .)|
// with G_i(t_k) = transport_generator(h, m_i(t_k), b_k, sigma), a left-endpoint
// discretization of the weak form of the continuity equation. `path` holds
// one belief per time node and may carry time-varying weights. Rejects
// functionals with psi(T, .) != 0.
double weak_solution_residual(std::span<const Belief> path, const TimeGrid& tg,
                              const DriftField& drift, DiffusionCoefficient sigma,
                              const CylinderFunctional& phi);
double weak_solution_residual(const BeliefPath& path, const DriftField& drift,
                              DiffusionCoefficient sigma,
                              const CylinderFunctional& phi);

}  // namespace mfgblind

#endif  // MFGBLIND_BELIEF_H_
