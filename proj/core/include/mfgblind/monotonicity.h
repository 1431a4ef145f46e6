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

#ifndef MFGBLIND_MONOTONICITY_H_
#define MFGBLIND_MONOTONICITY_H_

// Sampling-based certificates for the monotonicity conditions behind
// uniqueness of blind equilibria, the pairing between fields and signed
// beliefs, and the belief generator on cylinder functionals.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mfgblind/belief.h"
#include "mfgblind/cost_model.h"

namespace mfgblind {

// mu1 - mu2 as a signed combination of densities.
class SignedBeliefDiff {
 public:
  static constexpr double kBalanceTolerance = 1e-12;

  // Signed weights must sum to zero.
  SignedBeliefDiff(std::vector<double> signed_weights, std::vector<Density> atoms);
  static SignedBeliefDiff between(const Belief& mu1, const Belief& mu2);

  std::size_t size() const { return atoms_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  const Density& atom(std::size_t i) const { return atoms_[i]; }

 private:
  std::vector<double> weights_;
  std::vector<Density> atoms_;
};

// int (f(m1) - f(m2)) d(m1 - m2).
double l2_pairing(const CostModel& cm, const Density& m1, const Density& m2);

// sum_i s_i int f~(Delta) dm_i with f~(Delta) = sum_j s_j f(m_j).
double lifted_pairing(const CostModel& cm, const SignedBeliefDiff& delta);
double lifted_pairing(const CostModel& cm, const Belief& mu1, const Belief& mu2);
// Same with the terminal cost U0.
double lifted_terminal_pairing(const CostModel& cm, const Belief& mu1,
                               const Belief& mu2);

// (g(x) + g(y)) / 2 - g(z)) * ((x + y) / 2 - z): the lifted pairing of
// (delta_{delta_x} + delta_{delta_y}) / 2 - delta_{delta_z} under the moment
// cost x g(mean). Arguments are coordinates in [0, 1].
double counterexample_gap(const std::function<double(double)>& g, double x,
                          double y, double z);

struct PairingReport {
  std::string model;
  std::uint64_t seed = 0;
  int trials = 0;
  double value = 0.0;
  double min_over_trials = 0.0;
  int witness_trial = -1;
  // The belief pair achieving min_over_trials.
  std::optional<Belief> witness_first;
  std::optional<Belief> witness_second;
};

struct CertifyOptions {
  // For moment costs, trial 0 is the best closed-form (x, y, z) witness
  // found on a scan of grid nodes.
  bool witness_scan = true;
  int scan_points = 41;
  int max_atoms = 8;
};

// Dirichlet(1, ..., 1) weights over 1..max_atoms atoms, each a mollified
// Dirac (bandwidth 2h) at a uniform centre or a normalized random mixture of
// 2 to 4 of them.
Belief sample_belief(const TorusGrid& grid, std::mt19937_64& rng, int max_atoms);

// Minimum of lifted_pairing over `trials` random belief pairs. A negative
// minimum certifies a violation; a nonnegative one is only evidence.
PairingReport certify_blind_monotone(const CostModel& cm, std::uint64_t seed,
                                     int trials, const CertifyOptions& options = {});

// JSON: {model, trials, min_pairing, witness: {first, second, trial}, seed}.
std::string pairing_report_json(const PairingReport& report, int indent = 2);

// <phi, Delta> = sum_i s_i int(phi dm_i).
double duality_pairing(const ScalarField& phi, const SignedBeliefDiff& delta);

// sum_i w_i psi_s(t, int(h dm_i)) transport_generator(h, m_i, b, sigma).
double operator_A_cylinder(const Belief& mu, const VectorField& drift,
                           double sigma, const CylinderFunctional& phi,
                           double t = 0.0);

// Left-endpoint time integral of lifted_pairing(f) along two belief paths
// plus the terminal lifted pairing at the final node.
double lifted_coupling_integral(const CostModel& cm, const BeliefPath& first,
                                const BeliefPath& second);

}  // namespace mfgblind

#endif  // MFGBLIND_MONOTONICITY_H_
