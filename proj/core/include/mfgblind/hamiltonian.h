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

#ifndef MFGBLIND_HAMILTONIAN_H_
#define MFGBLIND_HAMILTONIAN_H_

#include <span>
#include <string>

namespace mfgblind {

enum class HamiltonianKind { kAbs, kSmoothedAbs, kCappedQuadratic };

// Radial, convex Hamiltonians H(x, p) = G(|p|) with G(0) = 0 and G globally
// Lipschitz:
//   abs               G(r) = r
//   smoothed_abs      G(r) = sqrt(r^2 + delta^2) - delta
//   capped_quadratic  G(r) = r^2 / 2 for r <= P, P r - P^2 / 2 beyond.
class Hamiltonian {
 public:
  static Hamiltonian abs();
  static Hamiltonian smoothed_abs(double delta);
  static Hamiltonian capped_quadratic(double cap);
  // Parses "abs", "smoothed_abs", "capped_quadratic".
  static Hamiltonian from_name(const std::string& kind, double delta, double cap);

  HamiltonianKind kind() const { return kind_; }
  std::string name() const;
  double smoothing() const { return delta_; }
  double cap() const { return cap_; }

  double profile(double r) const;
  double profile_slope(double r) const;

  double value(std::span<const double> p) const;
  // D_pH(p); zero at p = 0 for every member of the catalogue.
  void gradient(std::span<const double> p, std::span<double> out) const;
  double lipschitz() const;
  // True when the subdifferential of H at p = 0 is the whole unit ball.
  bool kinked_at_origin() const { return kind_ == HamiltonianKind::kAbs; }

 private:
  Hamiltonian(HamiltonianKind kind, double delta, double cap)
      : kind_(kind), delta_(delta), cap_(cap) {}

  HamiltonianKind kind_;
  double delta_ = 0.0;
  double cap_ = 1.0;
};

}  // namespace mfgblind

#endif  // MFGBLIND_HAMILTONIAN_H_
