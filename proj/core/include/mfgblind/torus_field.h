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

#ifndef MFGBLIND_TORUS_FIELD_H_
#define MFGBLIND_TORUS_FIELD_H_

// Uniform periodic grids on the unit torus [0,1)^d (d = 1 or 2) and the
// node-valued fields that live on them.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace mfgblind {

// A point of the torus. The second coordinate is ignored when dim == 1.
using Point = std::array<double, 2>;

// Nodes sit at x_i = i * h, i = 0..n-1, along each axis. Node indices are
// flattened with the first axis varying fastest.
struct TorusGrid {
  int dim = 1;
  int n = 0;
  double h = 0.0;

  std::size_t size() const {
    return dim == 1 ? static_cast<std::size_t>(n)
                    : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  }
  double cell_volume() const { return dim == 1 ? h : h * h; }

  int wrap(int i) const {
    const int r = i % n;
    return r < 0 ? r + n : r;
  }
  std::size_t index(int i) const { return static_cast<std::size_t>(wrap(i)); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(wrap(i)) +
           static_cast<std::size_t>(n) * static_cast<std::size_t>(wrap(j));
  }

  // Periodic neighbour of `node` shifted by `offset` along `axis`.
  std::size_t neighbor(std::size_t node, int axis, int offset) const {
    const int i = static_cast<int>(node % static_cast<std::size_t>(n));
    if (dim == 1) return index(i + offset);
    const int j = static_cast<int>(node / static_cast<std::size_t>(n));
    return axis == 0 ? index(i + offset, j) : index(i, j + offset);
  }

  Point position(std::size_t node) const {
    const auto nn = static_cast<std::size_t>(n);
    if (dim == 1) return {static_cast<double>(node) * h, 0.0};
    return {static_cast<double>(node % nn) * h,
            static_cast<double>(node / nn) * h};
  }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;
};

// Rejects dim outside {1, 2} and n < 8.
TorusGrid build_grid(int dim, int n);

// Scalar values per node (value functions, payments, test functions).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const TorusGrid& grid, double fill = 0.0);
  // Throws InvalidArgument on size mismatch or non-finite values.
  ScalarField(const TorusGrid& grid, std::vector<double> values);

  static ScalarField from_function(const TorusGrid& grid,
                                   const std::function<double(const Point&)>& f);

  const TorusGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t node) const { return values_[node]; }

  double min() const;
  double max() const;

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

// A probability density with respect to the uniform grid measure:
// values >= 0 and sum(values) * h^dim = 1.
class Density {
 public:
  // Masses within this distance of 1 are accepted by the checked
  // constructor; construction helpers below normalize to 1e-12.
  static constexpr double kMassTolerance = 1e-10;

  Density() = default;
  // Checks nonnegativity and unit mass. Round-off negatives above -1e-12
  // are clamped to zero.
  Density(const TorusGrid& grid, std::vector<double> values);

  // Rescales nonnegative values to unit mass.
  static Density normalized(const TorusGrid& grid, std::vector<double> values);

  const TorusGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t node) const { return values_[node]; }
  double mass() const;

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

// dim components per node, stored component-major.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const TorusGrid& grid, double fill = 0.0);
  VectorField(const TorusGrid& grid, std::vector<double> components);

  const TorusGrid& grid() const { return grid_; }
  std::span<const double> component(int axis) const;
  double at(std::size_t node, int axis) const {
    return components_[static_cast<std::size_t>(axis) * grid_.size() + node];
  }
  std::span<const double> raw() const { return components_; }
  // Largest Euclidean norm over nodes.
  double sup_norm() const;

 private:
  TorusGrid grid_;
  std::vector<double> components_;
};

double circle_distance(double x, double y);

// Wrapped Gaussian of standard deviation `bandwidth` (default 2h) centred at
// `center`, normalized to unit mass. Rejects bandwidth < h.
Density mollified_dirac(const TorusGrid& grid, const Point& center,
                        std::optional<double> bandwidth = std::nullopt);

// All mass on a single node.
Density node_dirac(const TorusGrid& grid, std::size_t node);

Density uniform_density(const TorusGrid& grid);

// sum(phi * m) * h^dim.
double integrate(const ScalarField& phi, const Density& m);

// Second-order centred 5-point (3-point in 1-D) periodic Laplacian.
ScalarField laplacian(const ScalarField& phi);

// Exact W1 on the circle between two 1-D densities, treating node masses as
// point masses: min_c h * sum_k |F1_k - F2_k - c| with c a median of the CDF
// differences.
double wasserstein1_circle(const Density& m1, const Density& m2);

// Circular mean position in [0,1) of a 1-D density.
double circular_mean(const Density& m);

// sup_x |a(x) - b(x)|.
double sup_distance(std::span<const double> a, std::span<const double> b);

}  // namespace mfgblind

#endif  // MFGBLIND_TORUS_FIELD_H_
