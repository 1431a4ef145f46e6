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

#include "mfgblind/hamiltonian.h"

#include <algorithm>
#include <cmath>

#include "mfgblind/errors.h"

namespace mfgblind {
namespace {

double norm(std::span<const double> p) {
  double sq = 0.0;
  for (double x : p) sq += x * x;
  return std::sqrt(sq);
}

}  // namespace

Hamiltonian Hamiltonian::abs() { return {HamiltonianKind::kAbs, 0.0, 1.0}; }

Hamiltonian Hamiltonian::smoothed_abs(double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InvalidArgument("smoothed_abs: smoothing must be >= 0");
  }
  return {HamiltonianKind::kSmoothedAbs, delta, 1.0};
}

Hamiltonian Hamiltonian::capped_quadratic(double cap) {
  if (!(cap > 0.0) || !std::isfinite(cap)) {
    throw InvalidArgument("capped_quadratic: cap must be > 0");
  }
  return {HamiltonianKind::kCappedQuadratic, 0.0, cap};
}

Hamiltonian Hamiltonian::from_name(const std::string& kind, double delta,
                                   double cap) {
  if (kind == "abs") return abs();
  if (kind == "smoothed_abs") return smoothed_abs(delta);
  if (kind == "capped_quadratic") return capped_quadratic(cap);
  throw InvalidArgument("unknown hamiltonian kind '" + kind + "'");
}

std::string Hamiltonian::name() const {
  switch (kind_) {
    case HamiltonianKind::kAbs:
      return "abs";
    case HamiltonianKind::kSmoothedAbs:
      return "smoothed_abs";
    case HamiltonianKind::kCappedQuadratic:
      return "capped_quadratic";
  }
  return "unknown";
}

double Hamiltonian::profile(double r) const {
  switch (kind_) {
    case HamiltonianKind::kAbs:
      return r;
    case HamiltonianKind::kSmoothedAbs:
      return std::sqrt(r * r + delta_ * delta_) - delta_;
    case HamiltonianKind::kCappedQuadratic:
      return r <= cap_ ? 0.5 * r * r : cap_ * r - 0.5 * cap_ * cap_;
  }
  return 0.0;
}

double Hamiltonian::profile_slope(double r) const {
  if (r <= 0.0) return 0.0;
  switch (kind_) {
    case HamiltonianKind::kAbs:
      return 1.0;
    case HamiltonianKind::kSmoothedAbs:
      return r / std::sqrt(r * r + delta_ * delta_);
    case HamiltonianKind::kCappedQuadratic:
      return std::min(r, cap_);
  }
  return 0.0;
}

double Hamiltonian::value(std::span<const double> p) const {
  return profile(norm(p));
}

void Hamiltonian::gradient(std::span<const double> p,
                           std::span<double> out) const {
  const double r = norm(p);
  if (r == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  // p[a] / r rather than p[a] * (1 / r): in 1-D this keeps sign(p) exact.
  const double slope = profile_slope(r);
  for (std::size_t a = 0; a < p.size(); ++a) out[a] = slope * (p[a] / r);
}

double Hamiltonian::lipschitz() const {
  return kind_ == HamiltonianKind::kCappedQuadratic ? cap_ : 1.0;
}

}  // namespace mfgblind
