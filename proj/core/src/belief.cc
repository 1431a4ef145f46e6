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

#include "mfgblind/belief.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "mfgblind/errors.h"
#include "mfgblind/parallel.h"
#include "mfgblind/transport.h"

namespace mfgblind {
namespace {

void require_same_grid(const Belief& a, const Belief& b, const char* what) {
  if (!(a.grid() == b.grid())) throw GridMismatch(std::string(what) + ": grid mismatch");
}

ScalarField weighted_sum(const Belief& mu,
                         const std::function<ScalarField(const Density&)>& map) {
  std::vector<ScalarField> parts(mu.size());
  parallel_for(mu.size(), [&](std::size_t i) { parts[i] = map(mu.atom(i)); });
  std::vector<double> out(mu.grid().size(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto v = parts[i].values();
    const double w = mu.weight(i);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * v[k];
  }
  return ScalarField(mu.grid(), std::move(out));
}

}  // namespace

Belief::Belief(std::vector<double> weights, std::vector<Density> atoms)
    : weights_(std::move(weights)), atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InvalidArgument("Belief: needs at least one atom");
  if (atoms_.size() > kMaxAtoms) {
    throw InvalidArgument("Belief: at most 64 atoms, got " +
                          std::to_string(atoms_.size()));
  }
  if (weights_.size() != atoms_.size()) {
    throw InvalidArgument("Belief: weights and atoms differ in length");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("Belief: weights must be positive");
    }
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw InvalidArgument("Belief: weights sum to " + std::to_string(total));
  }
  for (const auto& m : atoms_) {
    if (!(m.grid() == atoms_.front().grid())) {
      throw GridMismatch("Belief: atoms live on different grids");
    }
  }
}

Belief Belief::dirac(Density m) {
  std::vector<Density> atoms;
  atoms.push_back(std::move(m));
  return Belief({1.0}, std::move(atoms));
}

Belief Belief::normalized(std::vector<double> weights, std::vector<Density> atoms) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw InvalidArgument("Belief: zero total weight");
  for (double& w : weights) w /= total;
  return Belief(std::move(weights), std::move(atoms));
}

Belief BeliefPath::at(std::size_t k) const {
  std::vector<Density> atoms_k;
  atoms_k.reserve(atoms.size());
  for (const auto& path : atoms) atoms_k.push_back(path.slices.at(k));
  return Belief(weights, std::move(atoms_k));
}

std::vector<Belief> BeliefPath::slices() const {
  std::vector<Belief> out;
  out.reserve(nodes());
  for (std::size_t k = 0; k < nodes(); ++k) out.push_back(at(k));
  return out;
}

CylinderFunctional CylinderFunctional::linear_decay(ScalarField inner,
                                                    double horizon_end) {
  const double T = horizon_end;
  return {std::move(inner), [T](double t, double s) { return (T - t) * s; },
          [](double, double s) { return -s; },
          [T](double t, double) { return T - t; }};
}

CylinderFunctional CylinderFunctional::identity(ScalarField inner) {
  return {std::move(inner), [](double, double s) { return s; },
          [](double, double) { return 0.0; }, [](double, double) { return 1.0; }};
}

CylinderFunctional CylinderFunctional::quadratic_decay(ScalarField inner,
                                                       double horizon_end) {
  const double T = horizon_end;
  return {std::move(inner), [T](double t, double s) { return 0.5 * (T - t) * s * s; },
          [](double, double s) { return -0.5 * s * s; },
          [T](double t, double s) { return (T - t) * s; }};
}

double CylinderFunctional::value(double t, const Density& m) const {
  return outer(t, integrate(inner, m));
}

double CylinderFunctional::value(double t, const Belief& mu) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) acc += mu.weight(i) * value(t, mu.atom(i));
  return acc;
}

BeliefPath push_forward(const Belief& mu0, const DriftField& drift,
                        DiffusionCoefficient sigma, const TimeGrid& tg) {
  BeliefPath path{tg, std::vector<double>(mu0.weights().begin(), mu0.weights().end()),
                  std::vector<DensityPath>(mu0.size())};
  parallel_for(mu0.size(), [&](std::size_t i) {
    path.atoms[i] = solve_fp_forward(mu0.atom(i), drift, sigma, tg);
  });
  return path;
}

ScalarField aggregate_running(const Belief& mu, const CostModel& cm) {
  return weighted_sum(mu, [&](const Density& m) { return cm.running(m); });
}

ScalarField aggregate_terminal(const Belief& mu, const CostModel& cm) {
  return weighted_sum(mu, [&](const Density& m) { return cm.terminal(m); });
}

double belief_distance(const Belief& mu, const Belief& nu) {
  require_same_grid(mu, nu, "belief_distance");
  if (mu.grid().dim != 1) throw InvalidArgument("belief_distance: requires 1-D");
  std::vector<double> cost(mu.size() * nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      cost[i * nu.size() + j] = wasserstein1_circle(mu.atom(i), nu.atom(j));
    }
  }
  return solve_transport(mu.weights(), nu.weights(), cost).cost;
}

double belief_holder_modulus(const BeliefPath& path, int samples) {
  if (path.atoms.empty()) return 0.0;
  if (path.atoms.front().slices.front().grid().dim != 1) {
    throw InvalidArgument("belief_holder_modulus: requires a 1-D grid");
  }
  const auto nodes = holder_sample_nodes(path.time_grid, samples);
  std::vector<Belief> sampled;
  sampled.reserve(nodes.size());
  for (int k : nodes) sampled.push_back(path.at(static_cast<std::size_t>(k)));
  const double dt = path.time_grid.dt();
  double best = 0.0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const double gap = std::sqrt(static_cast<double>(nodes[b] - nodes[a]) * dt);
      best = std::max(best, belief_distance(sampled[a], sampled[b]) / gap);
    }
  }
  return best;
}

double transport_generator(const ScalarField& h, const Density& m,
                           const VectorField& drift, double sigma) {
  const TorusGrid& g = h.grid();
  if (!(m.grid() == g) || !(drift.grid() == g)) {
    throw GridMismatch("transport_generator: grid mismatch");
  }
  const auto v = h.values();
  const double inv_h = 1.0 / g.h;
  const double inv_h2 = inv_h * inv_h;
  double acc = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    double lap = 0.0;
    double adv = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double up = v[g.neighbor(k, a, 1)];
      const double down = v[g.neighbor(k, a, -1)];
      lap += (up - v[k]) - (v[k] - down);
      const double b = drift.at(k, a);
      if (b > 0.0) {
        adv += b * (up - v[k]) * inv_h;
      } else if (b < 0.0) {
        adv += b * (v[k] - down) * inv_h;
      }
    }
    acc += (sigma * lap * inv_h2 + adv) * m[k];
  }
  return acc * g.cell_volume();
}

double weak_solution_residual(std::span<const Belief> path, const TimeGrid& tg,
                              const DriftField& drift, DiffusionCoefficient sigma,
                              const CylinderFunctional& phi) {
  if (path.size() != tg.nodes()) {
    throw InvalidArgument("weak_solution_residual: expected one belief per time node");
  }
  if (drift.slices.size() != tg.nodes()) {
    throw InvalidArgument("weak_solution_residual: drift slice count mismatch");
  }
  // The test function has to vanish at the final time.
  const double T = tg.end();
  std::vector<double> probes = {-1.0, 0.0, 0.5, 1.0, 2.0};
  for (std::size_t i = 0; i < path.back().size(); ++i) {
    probes.push_back(integrate(phi.inner, path.back().atom(i)));
  }
  for (double s : probes) {
    if (std::abs(phi.outer(T, s)) > 1e-12) {
      throw InvalidArgument("weak_solution_residual: test function must vanish at T");
    }
  }
  const double dt = tg.dt();
  const double s_sigma = sigma.value();
  double total = 0.0;
  for (int k = 0; k < tg.steps; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double t = tg.time(k);
    const Belief& mu = path[kk];
    double slice = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double s = integrate(phi.inner, mu.atom(i));
      const double gen =
          transport_generator(phi.inner, mu.atom(i), drift.slices[kk], s_sigma);
      slice += mu.weight(i) * (-phi.outer_dt(t, s) - phi.outer_ds(t, s) * gen);
    }
    total += dt * slice;
  }
  total -= phi.value(tg.time(0), path.front());
  return std::abs(total);
}

double weak_solution_residual(const BeliefPath& path, const DriftField& drift,
                              DiffusionCoefficient sigma,
                              const CylinderFunctional& phi) {
  const auto slices = path.slices();
  return weak_solution_residual(slices, path.time_grid, drift, sigma, phi);
}

}  // namespace mfgblind
