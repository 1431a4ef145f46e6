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

#ifndef MFGBLIND_HJB_FP_H_
#define MFGBLIND_HJB_FP_H_

// Backward Hamilton-Jacobi-Bellman and forward Fokker-Planck solvers on the
// torus. Both use the same splitting: an explicit upwind first-order part
// followed (HJB) or preceded (FP) by implicit diffusion. The linearized HJB
// step and the FP step are exact transposes of each other with respect to
// the pairing sum(phi * m) * h^dim.

#include <cstddef>
#include <span>
#include <vector>

#include "mfgblind/hamiltonian.h"
#include "mfgblind/torus_field.h"

namespace mfgblind {

// Uniform time nodes t_k = origin + k * horizon / steps, k = 0..steps.
struct TimeGrid {
  double horizon = 1.0;
  int steps = 1;
  double origin = 0.0;

  double dt() const { return horizon / static_cast<double>(steps); }
  double time(int k) const { return origin + static_cast<double>(k) * dt(); }
  double end() const { return origin + horizon; }
  std::size_t nodes() const { return static_cast<std::size_t>(steps) + 1; }
};

TimeGrid make_time_grid(double horizon, int steps, double origin = 0.0);

class DiffusionCoefficient {
 public:
  explicit DiffusionCoefficient(double sigma);
  double value() const { return sigma_; }

 private:
  double sigma_;
};

// One value-function slice per time node; the last slice is the terminal
// cost, bit for bit.
struct ValuePath {
  TimeGrid time_grid;
  std::vector<ScalarField> slices;
};

// slices[k] is the feedback used on [t_k, t_{k+1}); it is computed from the
// upwind gradient of u(t_{k+1}), which is what the explicit HJB step over
// that interval differentiates. The last slice is computed from u(T).
struct DriftField {
  TimeGrid time_grid;
  std::vector<VectorField> slices;

  double sup_norm() const;
};

struct DensityPath {
  TimeGrid time_grid;
  std::vector<Density> slices;
};

// (I - dt * sigma * Laplacian)^{-1}, applied axis by axis with a cyclic
// tridiagonal (Sherman-Morrison) solve. Axis solves commute.
class DiffusionSolver {
 public:
  DiffusionSolver(const TorusGrid& grid, double dt, double sigma);

  // Axis 0 then axis 1.
  void solve(std::span<double> values) const;
  // Axis 1 then axis 0: the transpose of solve().
  void solve_transposed(std::span<double> values) const;

 private:
  void solve_line(std::span<double> line) const;
  void solve_axis(std::span<double> values, int axis) const;

  TorusGrid grid_;
  double r_ = 0.0;
  bool identity_ = true;
  // Thomas factors of the corner-modified matrix and its correction vector.
  std::vector<double> c_prime_;
  std::vector<double> denom_;
  std::vector<double> z_;
  double gamma_ = 0.0;
  double correction_denom_ = 1.0;
};

// Godunov choice along one axis from the backward and forward differences.
// `side` is -1 (backward), +1 (forward) or 0 (flat or an exact tie); `flat`
// marks both one-sided slopes below 1e-10. `p` is the selected difference,
// used for the Hamiltonian value.
struct UpwindChoice {
  double p = 0.0;
  int side = 0;
  bool flat = false;
};
UpwindChoice godunov_axis(double backward, double forward);

// Discrete Hamiltonian H_h(u) at every node.
std::vector<double> discrete_hamiltonian(std::span<const double> u,
                                         const TorusGrid& grid,
                                         const Hamiltonian& hamiltonian);

// -D_pH evaluated at the upwind gradient of u, node by node. When H has a
// kink at p = 0 every control is optimal at flat nodes; there the incumbent
// drift, if given, is kept.
VectorField feedback_drift(const ScalarField& u, const Hamiltonian& hamiltonian,
                           const VectorField* incumbent = nullptr);

// Throws CflViolation unless dt * lip * sqrt(dim) / h <= 1.
void check_hjb_cfl(const TorusGrid& grid, double dt, double lipschitz);
// Throws CflViolation unless dt * max_x sum_a |b_a(x)| / h <= 1.
void check_fp_cfl(std::span<const VectorField> drift, double dt);

// One step of the linearized HJB scheme: (I - dt sigma Lap)^{-1} A phi with
// A phi = phi + dt * (b^+ D^+ phi + b^- D^- phi) per axis.
std::vector<double> linear_hjb_step(std::span<const double> phi,
                                    const VectorField& drift,
                                    DiffusionCoefficient sigma, double dt);

// One FP step: A^T (I - dt sigma Lap)^{-T} m.
std::vector<double> fp_step(std::span<const double> m, const VectorField& drift,
                            DiffusionCoefficient sigma, double dt);

// running_cost must have steps + 1 slices; the step from t_{k+1} back to t_k
// uses running_cost[k] (left-constant in time).
ValuePath solve_hjb_backward(std::span<const ScalarField> running_cost,
                             const ScalarField& terminal_cost,
                             const Hamiltonian& hamiltonian,
                             DiffusionCoefficient sigma, const TimeGrid& tg);

DriftField optimal_drift(const ValuePath& u, const Hamiltonian& hamiltonian,
                         const DriftField* incumbent = nullptr);

// Zero drift on every slice.
DriftField zero_drift(const TorusGrid& grid, const TimeGrid& tg);
// Same vector field on every slice.
DriftField constant_drift(const VectorField& b, const TimeGrid& tg);

DensityPath solve_fp_forward(const Density& m0, const DriftField& drift,
                             DiffusionCoefficient sigma, const TimeGrid& tg);

// Time-node indices round(j * steps / samples), j = 0..samples, deduplicated.
std::vector<int> holder_sample_nodes(const TimeGrid& tg, int samples);

// max over sampled node pairs (s, t) of W1(m_s, m_t) / sqrt(|t - s|). 1-D only.
double fp_holder_modulus(const DensityPath& path, int samples = 32);

}  // namespace mfgblind

#endif  // MFGBLIND_HJB_FP_H_
