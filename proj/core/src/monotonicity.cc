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

#include "mfgblind/monotonicity.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "json.hpp"
#include "mfgblind/belief_io.h"
#include "mfgblind/errors.h"
#include "mfgblind/parallel.h"

namespace mfgblind {
namespace {

std::mt19937_64 trial_rng(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

std::vector<double> dirichlet(std::mt19937_64& rng, std::size_t k) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(k);
  for (auto& x : w) x = expo(rng) + 1e-12;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

ScalarField combine(const CostModel& cm, const SignedBeliefDiff& delta,
                    bool terminal) {
  std::vector<double> out(cm.grid().size(), 0.0);
  for (std::size_t j = 0; j < delta.size(); ++j) {
    const ScalarField f =
        terminal ? cm.terminal(delta.atom(j)) : cm.running(delta.atom(j));
    const auto v = f.values();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += delta.weight(j) * v[k];
  }
  return ScalarField(cm.grid(), std::move(out));
}

double lifted(const CostModel& cm, const SignedBeliefDiff& delta, bool terminal) {
  // A density-independent field integrates to zero against a balanced difference.
  if (cm.independent_of_density()) return 0.0;
  const ScalarField field = combine(cm, delta, terminal);
  return duality_pairing(field, delta);
}

// Three-point witness on grid nodes minimizing counterexample_gap.
std::optional<std::pair<Belief, Belief>> scanned_witness(const CostModel& cm,
                                                         int scan_points) {
  const auto& g = cm.moment_function();
  if (!g || scan_points < 2) return std::nullopt;
  const TorusGrid& grid = cm.grid();
  std::vector<std::size_t> nodes;
  for (int s = 0; s < scan_points; ++s) {
    const auto node = static_cast<std::size_t>(
        std::lround(static_cast<double>(s) * (grid.n - 1) / (scan_points - 1)));
    if (nodes.empty() || nodes.back() != node) nodes.push_back(node);
  }
  double best = 0.0;
  std::size_t bx = 0, by = 0, bz = 0;
  for (std::size_t x : nodes) {
    for (std::size_t y : nodes) {
      if (y <= x) continue;
      for (std::size_t z : nodes) {
        const double gap = counterexample_gap(
            g->fn, static_cast<double>(x) * grid.h, static_cast<double>(y) * grid.h,
            static_cast<double>(z) * grid.h);
        if (gap < best) {
          best = gap;
          bx = x;
          by = y;
          bz = z;
        }
      }
    }
  }
  if (!(best < 0.0)) return std::nullopt;
  Belief first({0.5, 0.5}, {node_dirac(grid, bx), node_dirac(grid, by)});
  Belief second = Belief::dirac(node_dirac(grid, bz));
  return std::make_pair(std::move(first), std::move(second));
}

}  // namespace

SignedBeliefDiff::SignedBeliefDiff(std::vector<double> signed_weights,
                                   std::vector<Density> atoms)
    : weights_(std::move(signed_weights)), atoms_(std::move(atoms)) {
  if (weights_.size() != atoms_.size() || atoms_.empty()) {
    throw InvalidArgument("SignedBeliefDiff: weights and atoms differ in length");
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(total) > kBalanceTolerance) {
    throw InvalidArgument("SignedBeliefDiff: signed weights must sum to 0");
  }
  for (const auto& m : atoms_) {
    if (!(m.grid() == atoms_.front().grid())) {
      throw GridMismatch("SignedBeliefDiff: grid mismatch");
    }
  }
}

SignedBeliefDiff SignedBeliefDiff::between(const Belief& mu1, const Belief& mu2) {
  if (!(mu1.grid() == mu2.grid())) throw GridMismatch("SignedBeliefDiff: grid mismatch");
  std::vector<double> w;
  std::vector<Density> atoms;
  for (std::size_t i = 0; i < mu1.size(); ++i) {
    w.push_back(mu1.weight(i));
    atoms.push_back(mu1.atom(i));
  }
  for (std::size_t i = 0; i < mu2.size(); ++i) {
    w.push_back(-mu2.weight(i));
    atoms.push_back(mu2.atom(i));
  }
  return SignedBeliefDiff(std::move(w), std::move(atoms));
}

double l2_pairing(const CostModel& cm, const Density& m1, const Density& m2) {
  if (!(m1.grid() == m2.grid())) throw GridMismatch("l2_pairing: grid mismatch");
  const ScalarField f1 = cm.running(m1);
  const ScalarField f2 = cm.running(m2);
  std::vector<double> diff(f1.size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = f1[k] - f2[k];
  const ScalarField d(m1.grid(), std::move(diff));
  return integrate(d, m1) - integrate(d, m2);
}

double lifted_pairing(const CostModel& cm, const SignedBeliefDiff& delta) {
  return lifted(cm, delta, false);
}

double lifted_pairing(const CostModel& cm, const Belief& mu1, const Belief& mu2) {
  return lifted(cm, SignedBeliefDiff::between(mu1, mu2), false);
}

double lifted_terminal_pairing(const CostModel& cm, const Belief& mu1,
                               const Belief& mu2) {
  return lifted(cm, SignedBeliefDiff::between(mu1, mu2), true);
}

double counterexample_gap(const std::function<double(double)>& g, double x,
                          double y, double z) {
  return (0.5 * (g(x) + g(y)) - g(z)) * (0.5 * (x + y) - z);
}

Belief sample_belief(const TorusGrid& grid, std::mt19937_64& rng, int max_atoms) {
  if (max_atoms < 1) throw InvalidArgument("sample_belief: max_atoms must be >= 1");
  const int cap = std::min<int>(max_atoms, static_cast<int>(Belief::kMaxAtoms));
  std::uniform_int_distribution<int> count(1, cap);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> parts(2, 4);
  const auto k = static_cast<std::size_t>(count(rng));
  const auto weights = dirichlet(rng, k);
  std::vector<Density> atoms;
  atoms.reserve(k);
  auto center = [&] { return Point{unit(rng), unit(rng)}; };
  for (std::size_t i = 0; i < k; ++i) {
    if (unit(rng) < 0.5) {
      atoms.push_back(mollified_dirac(grid, center()));
      continue;
    }
    const auto p = static_cast<std::size_t>(parts(rng));
    const auto mix = dirichlet(rng, p);
    std::vector<double> values(grid.size(), 0.0);
    for (std::size_t j = 0; j < p; ++j) {
      const Density d = mollified_dirac(grid, center());
      for (std::size_t n = 0; n < values.size(); ++n) values[n] += mix[j] * d[n];
    }
    atoms.push_back(Density::normalized(grid, std::move(values)));
  }
  return Belief(weights, std::move(atoms));
}

PairingReport certify_blind_monotone(const CostModel& cm, std::uint64_t seed,
                                     int trials, const CertifyOptions& options) {
  if (trials < 1) throw InvalidArgument("certify_blind_monotone: trials must be >= 1");
  PairingReport report;
  report.model = cm.name();
  report.seed = seed;
  report.trials = trials;

  std::optional<std::pair<Belief, Belief>> seeded;
  if (options.witness_scan) seeded = scanned_witness(cm, options.scan_points);

  const TorusGrid& grid = cm.grid();
  std::vector<double> values(static_cast<std::size_t>(trials));
  parallel_for(values.size(), [&](std::size_t t) {
    if (t == 0 && seeded) {
      values[t] = lifted_pairing(cm, seeded->first, seeded->second);
      return;
    }
    auto rng = trial_rng(seed, static_cast<int>(t));
    const Belief a = sample_belief(grid, rng, options.max_atoms);
    const Belief b = sample_belief(grid, rng, options.max_atoms);
    values[t] = lifted_pairing(cm, a, b);
  });
  const auto best = std::min_element(values.begin(), values.end());
  report.witness_trial = static_cast<int>(best - values.begin());
  report.min_over_trials = *best;
  report.value = *best;
  if (report.witness_trial == 0 && seeded) {
    report.witness_first = seeded->first;
    report.witness_second = seeded->second;
  } else {
    auto rng = trial_rng(seed, report.witness_trial);
    report.witness_first = sample_belief(grid, rng, options.max_atoms);
    report.witness_second = sample_belief(grid, rng, options.max_atoms);
  }
  return report;
}

std::string pairing_report_json(const PairingReport& report, int indent) {
  nlohmann::json out;
  out["model"] = report.model;
  out["trials"] = report.trials;
  out["min_pairing"] = report.min_over_trials;
  out["seed"] = report.seed;
  nlohmann::json witness;
  witness["trial"] = report.witness_trial;
  if (report.witness_first) {
    witness["first"] = nlohmann::json::parse(belief_to_json(*report.witness_first));
  }
  if (report.witness_second) {
    witness["second"] = nlohmann::json::parse(belief_to_json(*report.witness_second));
  }
  out["witness"] = std::move(witness);
  return out.dump(indent);
}

double duality_pairing(const ScalarField& phi, const SignedBeliefDiff& delta) {
  double acc = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    acc += delta.weight(i) * integrate(phi, delta.atom(i));
  }
  return acc;
}

double operator_A_cylinder(const Belief& mu, const VectorField& drift, double sigma,
                           const CylinderFunctional& phi, double t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double s = integrate(phi.inner, mu.atom(i));
    acc += mu.weight(i) * phi.outer_ds(t, s) *
           transport_generator(phi.inner, mu.atom(i), drift, sigma);
  }
  return acc;
}

double lifted_coupling_integral(const CostModel& cm, const BeliefPath& first,
                                const BeliefPath& second) {
  if (first.nodes() != second.nodes()) {
    throw InvalidArgument("lifted_coupling_integral: time grids differ");
  }
  const double dt = first.time_grid.dt();
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < first.nodes(); ++k) {
    acc += dt * lifted_pairing(cm, first.at(k), second.at(k));
  }
  const std::size_t last = first.nodes() - 1;
  acc += lifted_terminal_pairing(cm, first.at(last), second.at(last));
  return acc;
}

}  // namespace mfgblind
