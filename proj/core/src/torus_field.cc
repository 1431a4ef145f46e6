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

#include "mfgblind/torus_field.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include "mfgblind/errors.h"

namespace mfgblind {
namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InvalidArgument(std::string(what) + ": non-finite value");
    }
  }
}

void require_size(const TorusGrid& grid, std::size_t size, const char* what) {
  if (grid.n < 1 || size != grid.size()) {
    throw InvalidArgument(std::string(what) + ": expected " +
                          std::to_string(grid.size()) + " values, got " +
                          std::to_string(size));
  }
}

double sum_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

}  // namespace

TorusGrid build_grid(int dim, int n) {
  if (dim != 1 && dim != 2) {
    throw InvalidArgument("unsupported dimension " + std::to_string(dim));
  }
  if (n < 8) {
    throw InvalidArgument("grid needs at least 8 points per axis, got " +
                          std::to_string(n));
  }
  return TorusGrid{dim, n, 1.0 / static_cast<double>(n)};
}

ScalarField::ScalarField(const TorusGrid& grid, double fill)
    : grid_(grid), values_(grid.size(), fill) {
  require_finite(values_, "ScalarField");
}

ScalarField::ScalarField(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  require_size(grid_, values_.size(), "ScalarField");
  require_finite(values_, "ScalarField");
}

ScalarField ScalarField::from_function(
    const TorusGrid& grid, const std::function<double(const Point&)>& f) {
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = f(grid.position(k));
  }
  return ScalarField(grid, std::move(values));
}

double ScalarField::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

Density::Density(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  require_size(grid_, values_.size(), "Density");
  require_finite(values_, "Density");
  for (double& v : values_) {
    if (v < 0.0) {
      if (v < -1e-12) throw InvalidArgument("Density: negative value");
      v = 0.0;
    }
  }
  if (std::abs(mass() - 1.0) > kMassTolerance) {
    throw InvalidArgument("Density: mass " + std::to_string(mass()) +
                          " is not 1");
  }
}

Density Density::normalized(const TorusGrid& grid, std::vector<double> values) {
  require_size(grid, values.size(), "Density");
  require_finite(values, "Density");
  const double total = sum_of(values) * grid.cell_volume();
  if (!(total > 0.0)) throw InvalidArgument("Density: zero total mass");
  for (double& v : values) {
    if (v < 0.0) throw InvalidArgument("Density: negative value");
    v /= total;
  }
  return Density(grid, std::move(values));
}

double Density::mass() const { return sum_of(values_) * grid_.cell_volume(); }

VectorField::VectorField(const TorusGrid& grid, double fill)
    : grid_(grid),
      components_(grid.size() * static_cast<std::size_t>(grid.dim), fill) {}

VectorField::VectorField(const TorusGrid& grid, std::vector<double> components)
    : grid_(grid), components_(std::move(components)) {
  if (components_.size() != grid_.size() * static_cast<std::size_t>(grid_.dim)) {
    throw InvalidArgument("VectorField: wrong number of components");
  }
  require_finite(components_, "VectorField");
}

std::span<const double> VectorField::component(int axis) const {
  return std::span<const double>(components_)
      .subspan(static_cast<std::size_t>(axis) * grid_.size(), grid_.size());
}

double VectorField::sup_norm() const {
  double best = 0.0;
  const std::size_t size = grid_.size();
  for (std::size_t k = 0; k < size; ++k) {
    double sq = 0.0;
    for (int a = 0; a < grid_.dim; ++a) sq += at(k, a) * at(k, a);
    best = std::max(best, std::sqrt(sq));
  }
  return best;
}

double circle_distance(double x, double y) {
  double d = std::fmod(std::abs(x - y), 1.0);
  return std::min(d, 1.0 - d);
}

Density mollified_dirac(const TorusGrid& grid, const Point& center,
                        std::optional<double> bandwidth) {
  const double width = bandwidth.value_or(2.0 * grid.h);
  if (!(width >= grid.h * (1.0 - 1e-12))) {
    throw InvalidArgument("mollified_dirac: bandwidth " + std::to_string(width) +
                          " is below the grid spacing (under-resolved)");
  }
  // Enough periodic images that the truncated tail is below 1e-300.
  const int images = static_cast<int>(std::ceil(40.0 * width)) + 1;
  const auto axis_profile = [&](double c) {
    std::vector<double> profile(static_cast<std::size_t>(grid.n));
    for (int i = 0; i < grid.n; ++i) {
      const double x = i * grid.h;
      double acc = 0.0;
      for (int k = -images; k <= images; ++k) {
        const double z = (x - c + k) / width;
        acc += std::exp(-0.5 * z * z);
      }
      profile[static_cast<std::size_t>(i)] = acc;
    }
    return profile;
  };
  std::vector<double> values(grid.size());
  const auto px = axis_profile(center[0]);
  if (grid.dim == 1) {
    values = px;
  } else {
    const auto py = axis_profile(center[1]);
    const auto n = static_cast<std::size_t>(grid.n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) values[i + n * j] = px[i] * py[j];
    }
  }
  return Density::normalized(grid, std::move(values));
}

Density node_dirac(const TorusGrid& grid, std::size_t node) {
  if (node >= grid.size()) throw InvalidArgument("node_dirac: node out of range");
  std::vector<double> values(grid.size(), 0.0);
  values[node] = 1.0 / grid.cell_volume();
  return Density(grid, std::move(values));
}

Density uniform_density(const TorusGrid& grid) {
  return Density(grid, std::vector<double>(grid.size(), 1.0));
}

double integrate(const ScalarField& phi, const Density& m) {
  if (!(phi.grid() == m.grid())) throw GridMismatch("integrate: grid mismatch");
  const auto a = phi.values();
  const auto b = m.values();
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc * m.grid().cell_volume();
}

ScalarField laplacian(const ScalarField& phi) {
  const TorusGrid& g = phi.grid();
  const auto v = phi.values();
  const double inv_h2 = 1.0 / (g.h * g.h);
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    double acc = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      acc += (v[g.neighbor(k, a, 1)] - v[k]) - (v[k] - v[g.neighbor(k, a, -1)]);
    }
    out[k] = acc * inv_h2;
  }
  return ScalarField(g, std::move(out));
}

double wasserstein1_circle(const Density& m1, const Density& m2) {
  if (!(m1.grid() == m2.grid())) {
    throw GridMismatch("wasserstein1_circle: grid mismatch");
  }
  if (m1.grid().dim != 1) {
    throw InvalidArgument("wasserstein1_circle: requires a 1-D grid");
  }
  const double h = m1.grid().h;
  const auto a = m1.values();
  const auto b = m2.values();
  std::vector<double> cdf(a.size());
  double running = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    running += (a[k] - b[k]) * h;
    cdf[k] = running;
  }
  // Flux across the arc (x_k, x_{k+1}) is cdf[k] - c; the optimal c is a
  // median of the cdf values (all arcs have length h).
  std::vector<double> sorted = cdf;
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  const double c = *mid;
  double cost = 0.0;
  for (double f : cdf) cost += std::abs(f - c);
  return cost * h;
}

double circular_mean(const Density& m) {
  if (m.grid().dim != 1) throw InvalidArgument("circular_mean: requires 1-D");
  const double two_pi = 2.0 * std::numbers::pi;
  double s = 0.0;
  double c = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double x = static_cast<double>(k) * m.grid().h;
    s += m[k] * std::sin(two_pi * x);
    c += m[k] * std::cos(two_pi * x);
  }
  double mean = std::atan2(s, c) / two_pi;
  if (mean < 0.0) mean += 1.0;
  return mean;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("sup_distance: size mismatch");
  double best = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    best = std::max(best, std::abs(a[k] - b[k]));
  }
  return best;
}

}  // namespace mfgblind
