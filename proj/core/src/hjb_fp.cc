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

#include "mfgblind/hjb_fp.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mfgblind/errors.h"

namespace mfgblind {
namespace {

// Relative gap under which two competing one-sided slopes count as a tie.
constexpr double kTieTolerance = 1e-10;
// One-sided slopes below this count as zero.
constexpr double kFlatGradient = 1e-10;

double courant_slack() { return 1.0 + 1e-12; }

// A phi (backward transport, explicit part of the linearized HJB step).
void transport_backward(const VectorField& b, double courant,
                        std::span<const double> in, std::span<double> out) {
  const TorusGrid& g = b.grid();
  const std::size_t size = g.size();
  for (std::size_t k = 0; k < size; ++k) {
    double acc = in[k];
    for (int a = 0; a < g.dim; ++a) {
      const double v = b.at(k, a);
      if (v > 0.0) {
        acc += courant * v * (in[g.neighbor(k, a, 1)] - in[k]);
      } else if (v < 0.0) {
        acc += courant * v * (in[k] - in[g.neighbor(k, a, -1)]);
      }
    }
    out[k] = acc;
  }
}

// A^T m (donor-cell upwind transport of mass).
void transport_forward(const VectorField& b, double courant,
                       std::span<const double> in, std::span<double> out) {
  const TorusGrid& g = b.grid();
  const std::size_t size = g.size();
  for (std::size_t k = 0; k < size; ++k) {
    double outflow = 0.0;
    for (int a = 0; a < g.dim; ++a) outflow += std::abs(b.at(k, a));
    double acc = (1.0 - courant * outflow) * in[k];
    for (int a = 0; a < g.dim; ++a) {
      const std::size_t left = g.neighbor(k, a, -1);
      const std::size_t right = g.neighbor(k, a, 1);
      const double from_left = b.at(left, a);
      const double from_right = b.at(right, a);
      if (from_left > 0.0) acc += courant * from_left * in[left];
      if (from_right < 0.0) acc -= courant * from_right * in[right];
    }
    out[k] = acc;
  }
}

// Upwind gradient at a node. `drift_p` zeroes the axes whose choice is a
// tie, which is where the feedback is set-valued for nonsmooth H. Returns
// true when every axis is flat.
bool upwind_gradient(const TorusGrid& g, std::span<const double> u,
                     std::size_t k, std::array<double, 2>& value_p,
                     std::array<double, 2>& drift_p) {
  value_p = {0.0, 0.0};
  drift_p = {0.0, 0.0};
  const double inv_h = 1.0 / g.h;
  bool flat = true;
  for (int a = 0; a < g.dim; ++a) {
    const double backward = (u[k] - u[g.neighbor(k, a, -1)]) * inv_h;
    const double forward = (u[g.neighbor(k, a, 1)] - u[k]) * inv_h;
    const UpwindChoice c = godunov_axis(backward, forward);
    value_p[static_cast<std::size_t>(a)] = c.p;
    drift_p[static_cast<std::size_t>(a)] = c.side == 0 ? 0.0 : c.p;
    flat = flat && c.flat;
  }
  return flat;
}

}  // namespace

TimeGrid make_time_grid(double horizon, int steps, double origin) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("time grid: horizon must be > 0");
  }
  if (steps < 1) throw InvalidArgument("time grid: steps must be >= 1");
  if (!std::isfinite(origin)) throw InvalidArgument("time grid: bad origin");
  return TimeGrid{horizon, steps, origin};
}

DiffusionCoefficient::DiffusionCoefficient(double sigma) : sigma_(sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("diffusion coefficient must be >= 0");
  }
}

double DriftField::sup_norm() const {
  double best = 0.0;
  for (const auto& s : slices) best = std::max(best, s.sup_norm());
  return best;
}

DiffusionSolver::DiffusionSolver(const TorusGrid& grid, double dt, double sigma)
    : grid_(grid), r_(dt * sigma / (grid.h * grid.h)), identity_(r_ == 0.0) {
  if (identity_) return;
  // Cyclic system: diagonal 1 + 2r, off-diagonals and corners -r.
  const auto n = static_cast<std::size_t>(grid.n);
  const double diag = 1.0 + 2.0 * r_;
  const double off = -r_;
  gamma_ = -diag;
  std::vector<double> d(n, diag);
  d[0] = diag - gamma_;
  d[n - 1] = diag - off * off / gamma_;
  c_prime_.assign(n, 0.0);
  denom_.assign(n, 0.0);
  denom_[0] = d[0];
  c_prime_[0] = off / denom_[0];
  for (std::size_t i = 1; i < n; ++i) {
    denom_[i] = d[i] - off * c_prime_[i - 1];
    c_prime_[i] = off / denom_[i];
  }
  // Solve B z = (gamma, 0, ..., 0, off).
  z_.assign(n, 0.0);
  z_[0] = gamma_;
  z_[n - 1] = off;
  z_[0] /= denom_[0];
  for (std::size_t i = 1; i < n; ++i) {
    z_[i] = (z_[i] - off * z_[i - 1]) / denom_[i];
  }
  for (std::size_t i = n - 1; i-- > 0;) z_[i] -= c_prime_[i] * z_[i + 1];
  correction_denom_ = 1.0 + z_[0] + off * z_[n - 1] / gamma_;
}

void DiffusionSolver::solve_line(std::span<double> x) const {
  const std::size_t n = x.size();
  const double off = -r_;
  x[0] /= denom_[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - off * x[i - 1]) / denom_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_prime_[i] * x[i + 1];
  const double factor = (x[0] + off * x[n - 1] / gamma_) / correction_denom_;
  for (std::size_t i = 0; i < n; ++i) x[i] -= factor * z_[i];
}

void DiffusionSolver::solve_axis(std::span<double> values, int axis) const {
  const auto n = static_cast<std::size_t>(grid_.n);
  if (grid_.dim == 1) {
    solve_line(values);
    return;
  }
  std::vector<double> line(n);
  for (std::size_t outer = 0; outer < n; ++outer) {
    for (std::size_t i = 0; i < n; ++i) {
      line[i] = axis == 0 ? values[i + n * outer] : values[outer + n * i];
    }
    solve_line(line);
    for (std::size_t i = 0; i < n; ++i) {
      (axis == 0 ? values[i + n * outer] : values[outer + n * i]) = line[i];
    }
  }
}

void DiffusionSolver::solve(std::span<double> values) const {
  if (identity_) return;
  for (int a = 0; a < grid_.dim; ++a) solve_axis(values, a);
}

void DiffusionSolver::solve_transposed(std::span<double> values) const {
  if (identity_) return;
  for (int a = grid_.dim - 1; a >= 0; --a) solve_axis(values, a);
}

UpwindChoice godunov_axis(double backward, double forward) {
  const double rising = std::max(backward, 0.0);
  const double falling = std::max(-forward, 0.0);
  if (rising == 0.0 && falling == 0.0) return {0.0, 0, true};
  const double scale = std::max(rising, falling);
  if (scale <= kFlatGradient) {
    return {rising >= falling ? backward : forward, 0, true};
  }
  if (std::abs(rising - falling) <= kTieTolerance * scale) {
    return {rising >= falling ? backward : forward, 0};
  }
  if (rising > falling) return {backward, -1};
  return {forward, 1};
}

std::vector<double> discrete_hamiltonian(std::span<const double> u,
                                         const TorusGrid& grid,
                                         const Hamiltonian& hamiltonian) {
  std::vector<double> out(u.size());
  std::array<double, 2> value_p{};
  std::array<double, 2> drift_p{};
  for (std::size_t k = 0; k < u.size(); ++k) {
    upwind_gradient(grid, u, k, value_p, drift_p);
    out[k] = hamiltonian.value(
        std::span<const double>(value_p.data(), static_cast<std::size_t>(grid.dim)));
  }
  return out;
}

VectorField feedback_drift(const ScalarField& u, const Hamiltonian& hamiltonian,
                           const VectorField* incumbent) {
  const TorusGrid& g = u.grid();
  if (incumbent != nullptr && !(incumbent->grid() == g)) {
    throw GridMismatch("feedback_drift: incumbent grid mismatch");
  }
  // Every control is optimal at a flat node only when G has a kink at 0.
  const bool keep = incumbent != nullptr && hamiltonian.kinked_at_origin();
  const std::size_t size = g.size();
  const auto dim = static_cast<std::size_t>(g.dim);
  std::vector<double> comps(size * dim, 0.0);
  std::array<double, 2> value_p{};
  std::array<double, 2> drift_p{};
  std::array<double, 2> dh{};
  for (std::size_t k = 0; k < size; ++k) {
    const bool flat = upwind_gradient(g, u.values(), k, value_p, drift_p);
    if (flat && keep) {
      for (std::size_t a = 0; a < dim; ++a) {
        comps[a * size + k] = incumbent->at(k, static_cast<int>(a));
      }
      continue;
    }
    hamiltonian.gradient(std::span<const double>(drift_p.data(), dim),
                         std::span<double>(dh.data(), dim));
    for (std::size_t a = 0; a < dim; ++a) comps[a * size + k] = -dh[a];
  }
  return VectorField(g, std::move(comps));
}

void check_hjb_cfl(const TorusGrid& grid, double dt, double lipschitz) {
  const double number = dt * lipschitz * std::sqrt(static_cast<double>(grid.dim)) / grid.h;
  if (number > courant_slack()) {
    throw CflViolation("HJB step violates CFL: dt * Lip(H) * sqrt(d) / h = " +
                       std::to_string(number) + " > 1");
  }
}

void check_fp_cfl(std::span<const VectorField> drift, double dt) {
  if (drift.empty()) return;
  double worst = 0.0;
  for (const auto& b : drift) {
    const TorusGrid& g = b.grid();
    for (std::size_t k = 0; k < g.size(); ++k) {
      double l1 = 0.0;
      for (int a = 0; a < g.dim; ++a) l1 += std::abs(b.at(k, a));
      worst = std::max(worst, l1);
    }
  }
  const double number = dt * worst / drift.front().grid().h;
  if (number > courant_slack()) {
    throw CflViolation("FP step violates CFL: dt * max|b| / h = " +
                       std::to_string(number) + " > 1");
  }
}

std::vector<double> linear_hjb_step(std::span<const double> phi,
                                    const VectorField& drift,
                                    DiffusionCoefficient sigma, double dt) {
  const TorusGrid& g = drift.grid();
  if (phi.size() != g.size()) throw GridMismatch("linear_hjb_step: size mismatch");
  std::vector<double> out(phi.size());
  transport_backward(drift, dt / g.h, phi, out);
  DiffusionSolver(g, dt, sigma.value()).solve(out);
  return out;
}

std::vector<double> fp_step(std::span<const double> m, const VectorField& drift,
                            DiffusionCoefficient sigma, double dt) {
  const TorusGrid& g = drift.grid();
  if (m.size() != g.size()) throw GridMismatch("fp_step: size mismatch");
  std::vector<double> work(m.begin(), m.end());
  DiffusionSolver(g, dt, sigma.value()).solve_transposed(work);
  std::vector<double> out(m.size());
  transport_forward(drift, dt / g.h, work, out);
  return out;
}

ValuePath solve_hjb_backward(std::span<const ScalarField> running_cost,
                             const ScalarField& terminal_cost,
                             const Hamiltonian& hamiltonian,
                             DiffusionCoefficient sigma, const TimeGrid& tg) {
  if (running_cost.size() != tg.nodes()) {
    throw InvalidArgument("solve_hjb_backward: expected " +
                          std::to_string(tg.nodes()) + " running-cost slices, got " +
                          std::to_string(running_cost.size()));
  }
  const TorusGrid& g = terminal_cost.grid();
  for (const auto& f : running_cost) {
    if (!(f.grid() == g)) throw GridMismatch("solve_hjb_backward: grid mismatch");
  }
  const double dt = tg.dt();
  check_hjb_cfl(g, dt, hamiltonian.lipschitz());
  const DiffusionSolver diffusion(g, dt, sigma.value());

  std::vector<ScalarField> slices(tg.nodes());
  slices.back() = terminal_cost;
  std::vector<double> u(terminal_cost.values().begin(), terminal_cost.values().end());
  for (int k = tg.steps - 1; k >= 0; --k) {
    const auto ham = discrete_hamiltonian(u, g, hamiltonian);
    const auto f = running_cost[static_cast<std::size_t>(k)].values();
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = u[i] - dt * ham[i] + dt * f[i];
    }
    diffusion.solve(u);
    slices[static_cast<std::size_t>(k)] = ScalarField(g, u);
  }
  return ValuePath{tg, std::move(slices)};
}

DriftField optimal_drift(const ValuePath& u, const Hamiltonian& hamiltonian,
                         const DriftField* incumbent) {
  DriftField drift{u.time_grid, {}};
  const std::size_t nodes = u.slices.size();
  if (incumbent != nullptr && incumbent->slices.size() != nodes) {
    throw InvalidArgument("optimal_drift: incumbent has wrong slice count");
  }
  drift.slices.reserve(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    const std::size_t source = std::min(k + 1, nodes - 1);
    drift.slices.push_back(feedback_drift(
        u.slices[source], hamiltonian,
        incumbent != nullptr ? &incumbent->slices[k] : nullptr));
  }
  return drift;
}

DriftField zero_drift(const TorusGrid& grid, const TimeGrid& tg) {
  return DriftField{tg, std::vector<VectorField>(tg.nodes(), VectorField(grid))};
}

DriftField constant_drift(const VectorField& b, const TimeGrid& tg) {
  return DriftField{tg, std::vector<VectorField>(tg.nodes(), b)};
}

DensityPath solve_fp_forward(const Density& m0, const DriftField& drift,
                             DiffusionCoefficient sigma, const TimeGrid& tg) {
  if (drift.slices.size() != tg.nodes()) {
    throw InvalidArgument("solve_fp_forward: drift has " +
                          std::to_string(drift.slices.size()) + " slices, expected " +
                          std::to_string(tg.nodes()));
  }
  const TorusGrid& g = m0.grid();
  for (const auto& b : drift.slices) {
    if (!(b.grid() == g)) throw GridMismatch("solve_fp_forward: grid mismatch");
  }
  check_fp_cfl(drift.slices, tg.dt());
  const double dt = tg.dt();
  const double courant = dt / g.h;
  const DiffusionSolver diffusion(g, dt, sigma.value());

  DensityPath path{tg, {}};
  path.slices.reserve(tg.nodes());
  path.slices.push_back(m0);
  std::vector<double> work(m0.values().begin(), m0.values().end());
  std::vector<double> next(work.size());
  for (int k = 0; k < tg.steps; ++k) {
    diffusion.solve_transposed(work);
    transport_forward(drift.slices[static_cast<std::size_t>(k)], courant, work, next);
    work.swap(next);
    path.slices.emplace_back(g, work);
    // Carry the clamped values forward so every slice is a valid density.
    const auto stored = path.slices.back().values();
    std::copy(stored.begin(), stored.end(), work.begin());
  }
  return path;
}

std::vector<int> holder_sample_nodes(const TimeGrid& tg, int samples) {
  if (samples < 1) throw InvalidArgument("holder modulus: samples must be >= 1");
  std::vector<int> nodes;
  for (int j = 0; j <= samples; ++j) {
    const double exact = static_cast<double>(j) * tg.steps / samples;
    const int k = static_cast<int>(std::lround(exact));
    if (nodes.empty() || nodes.back() != k) nodes.push_back(k);
  }
  return nodes;
}

double fp_holder_modulus(const DensityPath& path, int samples) {
  if (path.slices.empty()) return 0.0;
  if (path.slices.front().grid().dim != 1) {
    throw InvalidArgument("fp_holder_modulus: requires a 1-D grid");
  }
  const auto nodes = holder_sample_nodes(path.time_grid, samples);
  const double dt = path.time_grid.dt();
  double best = 0.0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const double gap = std::sqrt(static_cast<double>(nodes[b] - nodes[a]) * dt);
      const double w = wasserstein1_circle(
          path.slices[static_cast<std::size_t>(nodes[a])],
          path.slices[static_cast<std::size_t>(nodes[b])]);
      best = std::max(best, w / gap);
    }
  }
  return best;
}

}  // namespace mfgblind
